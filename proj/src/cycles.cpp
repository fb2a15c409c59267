#include "uagraph/cycles.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "uagraph/error.hpp"
#include "uagraph/tree_types.hpp"

namespace uagraph {

CycleRecord canonical_cycle(std::vector<Vertex> cycle) {
  if (cycle.size() < 3) throw ValidationError("a cycle needs at least 3 vertices");
  const auto it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), it, cycle.end());
  if (cycle[1] > cycle.back()) std::reverse(cycle.begin() + 1, cycle.end());
  CycleRecord r;
  r.length = static_cast<int>(cycle.size());
  r.min_vertex = cycle.front();
  r.vertices = std::move(cycle);
  return r;
}

namespace {

// Depth-first search for simple cycles through `start`, restricted to
// vertices in (floor, ceiling] other than start itself. A path of length p may
// only continue to u if u can still get back to start within max_len - p - 1
// steps, which a radius max_len/2 BFS around start decides.
class CycleScanner {
 public:
  explicit CycleScanner(const Graph& g) : g_(g), on_path_(g.size() + 1, 0), stamp_(g.size() + 1, 0), dist_(g.size() + 1) {}

  void scan(Vertex start, int max_len, Vertex floor, Vertex ceiling, std::vector<CycleRecord>& out) {
    const int half = max_len / 2;
    ++epoch_;
    std::vector<Vertex> queue{start};
    stamp_[start] = epoch_;
    dist_[start] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Vertex v = queue[q];
      if (dist_[v] == half) continue;
      for (Vertex u : g_.neighbors(v))
        if (u > floor && u <= ceiling && stamp_[u] != epoch_) {
          stamp_[u] = epoch_;
          dist_[u] = dist_[v] + 1;
          queue.push_back(u);
        }
    }
    auto back_dist = [&](Vertex u) { return stamp_[u] == epoch_ ? dist_[u] : half + 1; };

    std::vector<Vertex> path{start};
    std::vector<std::size_t> cursor{0};
    on_path_[start] = 1;
    while (!path.empty()) {
      const Vertex v = path.back();
      const auto nb = g_.neighbors(v);
      std::size_t& i = cursor.back();
      if (i >= nb.size()) {
        on_path_[v] = 0;
        path.pop_back();
        cursor.pop_back();
        continue;
      }
      const Vertex u = nb[i++];
      if (u == start) {
        if (path.size() >= 3 && path[1] < path.back()) out.push_back(canonical_cycle(path));
        continue;
      }
      const int len = static_cast<int>(path.size());  // edges used once u is appended
      if (u <= floor || u > ceiling || on_path_[u] || len >= max_len) continue;
      if (back_dist(u) > max_len - len) continue;
      path.push_back(u);
      cursor.push_back(0);
      on_path_[u] = 1;
    }
  }

 private:
  const Graph& g_;
  std::vector<char> on_path_;
  std::vector<std::uint32_t> stamp_;
  std::vector<int> dist_;
  std::uint32_t epoch_ = 0;
};

}  // namespace

std::vector<CycleRecord> find_cycles(const Graph& g, int max_len) {
  if (max_len < 3) throw ValidationError("max_len must be at least 3");
  std::vector<CycleRecord> out;
  CycleScanner scanner(g);
  for (Vertex s = 1; s <= g.size(); ++s) scanner.scan(s, max_len, s, static_cast<Vertex>(g.size()), out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CycleRecord> find_cycles_through(const Graph& g, Vertex v, int max_len, Vertex floor) {
  if (max_len < 3) throw ValidationError("max_len must be at least 3");
  if (!g.contains(v)) throw ValidationError(fmt::format("unknown vertex {}", v));
  std::vector<CycleRecord> out;
  if (v <= floor) return out;
  CycleScanner(g).scan(v, max_len, floor, static_cast<Vertex>(g.size()), out);
  std::sort(out.begin(), out.end());
  return out;
}

void CycleTracker::update(const UAGraph& g) {
  CycleScanner scanner(g.graph());
  for (auto v = static_cast<Vertex>(seen_ + 1); v <= g.n(); ++v) scanner.scan(v, max_len_, 0, v, cycles_);
  seen_ = g.n();
}

std::size_t CycleTracker::count(int length) const {
  return static_cast<std::size_t>(
      std::count_if(cycles_.begin(), cycles_.end(), [&](const CycleRecord& c) { return c.length == length; }));
}

// ---------------------------------------------------------------------------

namespace {

const std::string kSep = "|";

std::vector<std::string> split_hanging(const std::string& code) {
  const auto colon = code.find(':');
  if (code.empty() || code[0] != 'C' || colon == std::string::npos)
    throw ValidationError(fmt::format("malformed unicyclic code '{}'", code));
  std::vector<std::string> out;
  std::size_t pos = colon + 1;
  while (pos <= code.size()) {
    const auto next = code.find(kSep, pos);
    out.push_back(code.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

// Depth-0 types carry no trees, so completeness is marked in the prefix.
bool bare_complete(const std::string& code) {
  const auto colon = code.find(':');
  return colon != std::string::npos && colon > 0 && code[colon - 1] == '+';
}

std::string join_code(int ell, const std::vector<std::string>& seq, bool mark_complete = false) {
  std::string s = fmt::format("C{}{}:", ell, mark_complete ? "+" : "");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) s += kSep;
    s += seq[i];
  }
  return s;
}

std::vector<std::string> dihedral_min(const std::vector<std::string>& seq) {
  const std::size_t l = seq.size();
  std::vector<std::string> best;
  for (int dir = 0; dir < 2; ++dir)
    for (std::size_t r = 0; r < l; ++r) {
      std::vector<std::string> cand(l);
      for (std::size_t i = 0; i < l; ++i) cand[i] = dir == 0 ? seq[(r + i) % l] : seq[(r + l - i) % l];
      if (best.empty() || cand < best) best = std::move(cand);
    }
  return best;
}

// Interior vertices of a hanging tree rooted on the cycle (depth 0) must all
// have degree d for completeness; vertices at depth h are leaves of the ball.
bool hanging_complete(std::string_view code, int depth, int h, int d, bool on_cycle) {
  if (depth >= h) return true;
  const auto kids = child_codes(code);
  const int degree = static_cast<int>(kids.size()) + (on_cycle ? 2 : 1);
  if (degree != d) return false;
  for (auto c : kids)
    if (!hanging_complete(c, depth + 1, h, d, false)) return false;
  return true;
}

}  // namespace

int compare_unicyclic_codes(const std::string& a, const std::string& b) {
  if (a == b) return 0;
  auto ha = split_hanging(a), hb = split_hanging(b);
  if (bare_complete(a) != bare_complete(b)) return bare_complete(a) ? 1 : -1;
  if (ha.size() != hb.size()) return ha.size() < hb.size() ? -1 : 1;
  auto greater = [](const std::string& x, const std::string& y) { return compare_codes(x, y) > 0; };
  std::sort(ha.begin(), ha.end(), greater);
  std::sort(hb.begin(), hb.end(), greater);
  for (std::size_t i = 0; i < ha.size(); ++i)
    if (const int r = compare_codes(ha[i], hb[i]); r != 0) return r;
  return a < b ? -1 : 1;
}

int compare_unicyclic(const UnicyclicType& a, const UnicyclicType& b) { return compare_unicyclic_codes(a.code, b.code); }

UnicyclicType unicyclic_from_code(const std::string& code, int depth, int d) {
  UnicyclicType t;
  t.hanging = split_hanging(code);
  t.cycle_length = static_cast<int>(t.hanging.size());
  t.depth = depth;
  t.code = code;
  if (depth == 0) {
    for (const auto& c : t.hanging)
      if (c != "()") throw ValidationError(fmt::format("depth-0 code '{}' has hanging trees", code));
    t.complete = bare_complete(code);
    return t;
  }
  if (bare_complete(code)) throw ValidationError(fmt::format("completeness marker in depth-{} code '{}'", depth, code));
  const int h = depth;
  t.complete = std::all_of(t.hanging.begin(), t.hanging.end(),
                           [&](const std::string& c) { return hanging_complete(c, 0, h, d, true); });
  return t;
}

std::optional<UnicyclicType> classify_cycle(const Graph& g, const CycleRecord& c, int k, int d) {
  if (k < 0) throw ValidationError("depth must be non-negative");
  LocalBfs bfs(g);
  if (k == 0) {
    bfs.run(c.vertices, 0);
    if (bfs.induced_edge_count() != c.vertices.size()) return std::nullopt;
    const bool full = std::all_of(c.vertices.begin(), c.vertices.end(),
                                  [&](Vertex v) { return g.degree(v) == static_cast<std::size_t>(d); });
    return unicyclic_from_code(join_code(c.length, std::vector<std::string>(c.vertices.size(), "()"), full), 0, d);
  }
  const int h = k;
  const auto order = bfs.run(c.vertices, h);
  if (bfs.induced_edge_count() != order.size()) return std::nullopt;
  std::vector<std::string> code(order.size());
  std::map<Vertex, std::size_t> where;
  for (std::size_t i = 0; i < order.size(); ++i) where[order[i]] = i;
  for (std::size_t i = order.size(); i-- > 0;) {
    const Vertex v = order[i];
    const int dv = bfs.distance(v);
    std::vector<std::string> kids;
    if (dv < h)
      for (Vertex u : g.neighbors(v))
        if (bfs.distance(u) == dv + 1) kids.push_back(code[where[u]]);
    std::sort(kids.begin(), kids.end(), [](const std::string& x, const std::string& y) { return compare_codes(x, y) > 0; });
    std::string s = "(";
    for (const auto& kc : kids) s += kc;
    s += ')';
    code[i] = std::move(s);
  }
  std::vector<std::string> seq;
  for (Vertex v : c.vertices) seq.push_back(code[where[v]]);
  seq = dihedral_min(seq);
  UnicyclicType t = unicyclic_from_code(join_code(c.length, seq), k, d);
  // Completeness straight from the graph, as a cross-check of the code-based flag.
  bool complete = true;
  for (Vertex v : order)
    if (bfs.distance(v) < h && g.degree(v) != static_cast<std::size_t>(d)) complete = false;
  require(complete == t.complete, fmt::format("completeness mismatch for {}", t.code));
  return t;
}

UnicyclicCensus census_unicyclic(const Graph& g, int d, int ell, int k, const std::vector<CycleRecord>& cycles) {
  if (ell < 3) throw ValidationError("cycle length must be at least 3");
  if (k < 0) throw ValidationError("depth must be non-negative");
  UnicyclicCensus census;
  census.ell = ell;
  census.k = k;
  for (const auto& c : cycles) {
    if (c.length != ell) continue;
    ++census.cycles;
    const auto t = classify_cycle(g, c, k, d);
    if (!t) {
      ++census.multicyclic_balls;
      continue;
    }
    ++census.counts[t->code];
    census.complete[t->code] = t->complete;
    if (t->complete) ++census.complete_count;
  }
  return census;
}

UnicyclicCensus census_unicyclic(const Graph& g, int d, int ell, int k) {
  return census_unicyclic(g, d, ell, k, find_cycles(g, ell));
}

// ---------------------------------------------------------------------------

std::pair<bool, std::optional<MulticyclicWitness>> check_no_multicyclic(const Graph& g, int ell_max, int size_cap,
                                                                        Vertex prefix_s) {
  if (size_cap < 4) throw ValidationError("size cap must be at least 4");
  const int len = std::min(ell_max, size_cap);
  if (len < 3) return {true, std::nullopt};
  std::vector<CycleRecord> cycles;
  CycleScanner scanner(g);
  for (Vertex s = prefix_s + 1; s <= g.size(); ++s) scanner.scan(s, len, s, static_cast<Vertex>(g.size()), cycles);
  std::sort(cycles.begin(), cycles.end());
  LocalBfs bfs(g);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const auto& a = cycles[i];
    std::set<Vertex> va(a.vertices.begin(), a.vertices.end());
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      const auto& b = cycles[j];
      std::set<Vertex> uni = va;
      uni.insert(b.vertices.begin(), b.vertices.end());
      const bool overlap = uni.size() < a.vertices.size() + b.vertices.size();
      if (overlap) {
        if (static_cast<int>(uni.size()) <= size_cap)
          return {false, MulticyclicWitness{std::vector<Vertex>(uni.begin(), uni.end()), a, b}};
        continue;
      }
      const int budget = size_cap - a.length - b.length + 1;  // path edges allowed
      if (budget < 1) continue;
      bfs.run(a.vertices, budget, prefix_s);
      int best = -1;
      for (Vertex v : b.vertices)
        if (bfs.reached(v) && (best < 0 || bfs.distance(v) < best)) best = bfs.distance(v);
      if (best >= 1 && a.length + b.length + best - 1 <= size_cap) {
        // recover one shortest path for the witness
        std::vector<Vertex> verts(uni.begin(), uni.end());
        Vertex cur = 0;
        for (Vertex v : b.vertices)
          if (bfs.reached(v) && bfs.distance(v) == best) {
            cur = v;
            break;
          }
        while (bfs.distance(cur) > 0) {
          for (Vertex u : g.neighbors(cur))
            if (bfs.reached(u) && bfs.distance(u) == bfs.distance(cur) - 1) {
              cur = u;
              break;
            }
          if (bfs.distance(cur) > 0) verts.push_back(cur);
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        return {false, MulticyclicWitness{verts, a, b}};
      }
    }
  }
  return {true, std::nullopt};
}

std::vector<std::vector<int>> distance_profile(const Graph& g, const std::vector<std::vector<Vertex>>& sets) {
  for (const auto& s : sets) {
    if (s.empty()) throw ValidationError("distance profile needs non-empty sets");
    for (Vertex v : s)
      if (!g.contains(v)) throw ValidationError(fmt::format("unknown vertex {}", v));
  }
  std::vector<std::vector<int>> out(sets.size(), std::vector<int>(sets.size(), -1));
  LocalBfs bfs(g);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bfs.run(sets[i], LocalBfs::kUnbounded);
    for (std::size_t j = 0; j < sets.size(); ++j) {
      int best = -1;
      for (Vertex v : sets[j])
        if (bfs.reached(v) && (best < 0 || bfs.distance(v) < best)) best = bfs.distance(v);
      out[i][j] = best;
    }
  }
  return out;
}

}  // namespace uagraph
