#include "uagraph/ef_game.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "uagraph/error.hpp"
#include "uagraph/parallel.hpp"
#include "uagraph/tree_types.hpp"

namespace uagraph {

std::string to_string(Winner w) { return w == Winner::Duplicator ? "Duplicator" : "Spoiler"; }

// ---------------------------------------------------------------------------
// Exhaustive game

namespace {

class GameSolver {
 public:
  GameSolver(const Graph& g, const Graph& h) {
    n_[0] = static_cast<int>(g.size());
    n_[1] = static_cast<int>(h.size());
    const Graph* gs[2] = {&g, &h};
    for (int s = 0; s < 2; ++s)
      for (Vertex v = 1; v <= gs[s]->size(); ++v) {
        std::uint32_t mask = 0;
        for (Vertex u : gs[s]->neighbors(v)) mask |= 1u << (u - 1);
        adj_[s][v - 1] = mask;
      }
  }

  bool duplicator_wins(int rounds) {
    std::vector<std::pair<int, int>> pairs;
    return solve(pairs, rounds);
  }

 private:
  int n_[2] = {0, 0};
  std::uint32_t adj_[2][32] = {};
  std::unordered_map<std::uint64_t, bool> memo_;

  bool consistent(const std::vector<std::pair<int, int>>& pairs, int a, int b) const {
    for (const auto& [x, y] : pairs) {
      if ((x == a) != (y == b)) return false;
      if (x == a) continue;
      if (((adj_[0][x] >> a) & 1u) != ((adj_[1][y] >> b) & 1u)) return false;
    }
    return true;
  }

  static std::uint64_t key(std::vector<std::pair<int, int>> pairs, int rounds) {
    std::sort(pairs.begin(), pairs.end());
    std::uint64_t k = static_cast<std::uint64_t>(rounds);
    for (const auto& [x, y] : pairs) k = (k << 10) | static_cast<std::uint64_t>(x * 32 + y);
    return k;
  }

  bool solve(std::vector<std::pair<int, int>>& pairs, int rounds) {
    if (rounds == 0) return true;
    const std::uint64_t k = key(pairs, rounds);
    if (const auto it = memo_.find(k); it != memo_.end()) return it->second;
    bool result = true;
    for (int side = 0; side < 2 && result; ++side)
      for (int x = 0; x < n_[side] && result; ++x) {
        const bool pebbled = std::any_of(pairs.begin(), pairs.end(), [&](const auto& p) {
          return (side == 0 ? p.first : p.second) == x;
        });
        if (pebbled) continue;  // the partner is a reply that changes nothing
        bool answered = false;
        for (int y = 0; y < n_[1 - side] && !answered; ++y) {
          const int a = side == 0 ? x : y;
          const int b = side == 0 ? y : x;
          if (!consistent(pairs, a, b)) continue;
          pairs.emplace_back(a, b);
          answered = solve(pairs, rounds - 1);
          pairs.pop_back();
        }
        if (!answered) result = false;
      }
    memo_[k] = result;
    return result;
  }
};

}  // namespace

Winner ef_solve(const Graph& g, const Graph& h, int rounds, const EfOptions& opt) {
  if (rounds < 0) throw ValidationError("rounds must be non-negative");
  if (rounds > opt.max_rounds) throw GuardExceeded(fmt::format("{} rounds exceed the guard of {}", rounds, opt.max_rounds));
  const std::size_t cap = std::min<std::size_t>(opt.size_cap, 32);
  if (g.size() > cap || h.size() > cap)
    throw GuardExceeded(fmt::format("graphs of sizes {} and {} exceed the size cap {}", g.size(), h.size(), cap));
  GameSolver solver(g, h);
  return solver.duplicator_wins(rounds) ? Winner::Duplicator : Winner::Spoiler;
}

Partition partition_classes(const std::vector<Graph>& graphs, int rounds, int jobs, const EfOptions& opt) {
  const std::size_t n = graphs.size();
  std::vector<char> win(n * n, 0);
  parallel_for(n * n, jobs, [&](std::size_t idx) {
    win[idx] = ef_solve(graphs[idx / n], graphs[idx % n], rounds, opt) == Winner::Duplicator;
  });
  auto w = [&](std::size_t i, std::size_t j) { return win[i * n + j] != 0; };
  for (std::size_t i = 0; i < n; ++i) {
    require(w(i, i), fmt::format("relation is not reflexive at graph {}", i));
    for (std::size_t j = 0; j < n; ++j) {
      require(w(i, j) == w(j, i), fmt::format("relation is not symmetric on ({}, {})", i, j));
      if (!w(i, j)) continue;
      for (std::size_t k = 0; k < n; ++k)
        require(!w(j, k) || w(i, k), fmt::format("relation is not transitive on ({}, {}, {})", i, j, k));
    }
  }
  Partition p;
  p.class_of.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (p.class_of[i] >= 0) continue;
    const int id = static_cast<int>(p.classes.size());
    p.classes.emplace_back();
    for (std::size_t j = i; j < n; ++j)
      if (p.class_of[j] < 0 && w(i, j)) {
        p.class_of[j] = id;
        p.classes.back().push_back(j);
      }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Configuration and structure

GameConfig GameConfig::make(int R, Vertex n0, Vertex N0, int m, int d) {
  if (R < 1 || R > 12) throw ValidationError(fmt::format("rounds must be in [1, 12], got {}", R));
  if (N0 <= n0) throw ValidationError(fmt::format("need N0 > n0, got N0={} n0={}", N0, n0));
  if (m < 1 || d <= 2 * m)
    throw ValidationError(fmt::format("need m >= 1 and d > 2m (d = 2m is excluded), got m={} d={}", m, d));
  GameConfig c;
  c.R = R;
  c.a = 1;
  for (int i = 0; i < R; ++i) c.a *= 3;
  c.n0 = n0;
  c.N0 = N0;
  c.m = m;
  c.d = d;
  return c;
}

std::int64_t GameConfig::radius(int round) const {
  if (round < 1 || round > R) throw ValidationError(fmt::format("round {} outside [1, {}]", round, R));
  return std::int64_t{1} << (R - round + 1);
}

namespace {

int clamp_radius(std::int64_t r) {
  return static_cast<int>(std::min<std::int64_t>(r, std::numeric_limits<int>::max() - 1));
}

std::vector<Vertex> prefix(Vertex k, const Graph& g) {
  std::vector<Vertex> out;
  for (Vertex v = 1; v <= std::min<std::size_t>(k, g.size()); ++v) out.push_back(v);
  return out;
}

std::vector<Vertex> ball_of(const Graph& g, const std::vector<Vertex>& sources, std::int64_t r) {
  if (sources.empty()) return {};
  LocalBfs bfs(g);
  const auto order = bfs.run(sources, clamp_radius(r));
  std::vector<Vertex> out(order.begin(), order.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Distance from `from` to the nearest vertex of `to`, or -1 beyond `limit`.
int set_distance(const Graph& g, const std::vector<Vertex>& from, const std::vector<Vertex>& to, std::int64_t limit) {
  if (from.empty() || to.empty()) return -1;
  LocalBfs bfs(g);
  bfs.run(from, clamp_radius(limit));
  int best = -1;
  for (Vertex v : to)
    if (bfs.reached(v) && (best < 0 || bfs.distance(v) < best)) best = bfs.distance(v);
  return best;
}

struct Copy {
  std::string code;
  std::vector<Vertex> vertices;
};

// Maximal depth-b trees rooted at each vertex whose b-ball is acyclic.
std::vector<Copy> tree_copies(const Graph& g, int b) {
  std::vector<Copy> out;
  LocalBfs bfs(g);
  for (Vertex v = 1; v <= g.size(); ++v) {
    const auto order = bfs.run(v, b);
    if (bfs.induced_edge_count() + 1 != order.size()) continue;
    Copy c;
    c.vertices.assign(order.begin(), order.end());
    std::sort(c.vertices.begin(), c.vertices.end());
    c.code = ball_code(g, v, b);
    out.push_back(std::move(c));
  }
  return out;
}

struct AGraphCopy {
  UnicyclicType type;
  CycleRecord cycle;
  std::vector<Vertex> vertices;
};

std::vector<AGraphCopy> a_graph_copies(const Graph& g, const GameConfig& cfg, int depth) {
  std::vector<AGraphCopy> out;
  const int len = clamp_radius(std::max<std::int64_t>(3, cfg.a));
  for (const auto& c : find_cycles(g, len)) {
    auto t = classify_cycle(g, c, depth, cfg.d);
    if (!t) continue;
    out.push_back({*t, c, ball_of(g, c.vertices, depth)});
  }
  return out;
}

}  // namespace

std::vector<std::vector<Vertex>> far_apart_copies(const Graph& g, const std::vector<std::vector<Vertex>>& copies,
                                                  const GameConfig& cfg, std::size_t want) {
  const int a = clamp_radius(cfg.a);
  LocalBfs bfs(g);
  std::vector<char> near_core(g.size() + 1, 0);
  const auto core = prefix(cfg.N0, g);
  if (!core.empty() && a > 0) {
    for (Vertex v : bfs.run(core, a - 1)) near_core[v] = 1;
  }
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < copies.size(); ++i)
    if (std::none_of(copies[i].begin(), copies[i].end(), [&](Vertex v) { return near_core[v] != 0; }))
      usable.push_back(i);
  std::map<std::size_t, std::set<Vertex>> halo;  // vertices within a-1 of a copy
  auto halo_of = [&](std::size_t i) -> const std::set<Vertex>& {
    auto it = halo.find(i);
    if (it != halo.end()) return it->second;
    const auto order = bfs.run(copies[i], std::max(a - 1, 0));
    return halo.emplace(i, std::set<Vertex>(order.begin(), order.end())).first->second;
  };
  auto compatible = [&](std::size_t i, std::size_t j) {
    const auto& h = halo_of(i);
    return std::none_of(copies[j].begin(), copies[j].end(), [&](Vertex v) { return h.count(v) != 0; });
  };
  std::vector<std::size_t> chosen, best;
  std::size_t budget = 200000;
  std::function<bool(std::size_t)> search = [&](std::size_t from) {
    if (chosen.size() > best.size()) best = chosen;
    if (chosen.size() >= want) return true;
    for (std::size_t k = from; k < usable.size(); ++k) {
      if (budget == 0) return false;
      --budget;
      const std::size_t i = usable[k];
      if (!std::all_of(chosen.begin(), chosen.end(), [&](std::size_t j) { return compatible(j, i); })) continue;
      chosen.push_back(i);
      if (search(k + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  search(0);
  std::vector<std::vector<Vertex>> out;
  for (std::size_t i : best) out.push_back(copies[i]);
  return out;
}

std::vector<CycleRecord> noncomplete_kernels(const Graph& g, const GameConfig& cfg) {
  const std::int64_t r = std::int64_t{1} << cfg.R;
  std::vector<CycleRecord> out;
  for (const auto& c : find_cycles(g, clamp_radius(std::max<std::int64_t>(3, r)))) {
    if (c.min_vertex <= cfg.n0) continue;
    const auto t = classify_cycle(g, c, clamp_radius(r), cfg.d);
    if (!t || !t->complete) out.push_back(c);
  }
  return out;
}

StructureSummary summarize_structure(const Graph& g, const GameConfig& cfg) {
  StructureSummary s;
  s.kernels = noncomplete_kernels(g, cfg);
  for (const auto& c : a_graph_copies(g, cfg, clamp_radius(cfg.a))) {
    if (c.type.complete) ++s.complete_a_graphs;
    else ++s.noncomplete_types[c.type.code];
  }
  for (Vertex v : prefix(cfg.N0, g))
    if (g.degree(v) != static_cast<std::size_t>(cfg.d)) s.core_deficient.push_back(v);
  return s;
}

PropertyReport check_Q1(const Graph& g, const GameConfig& cfg) {
  PropertyReport rep;
  auto fail = [&](int clause, std::string msg, std::vector<Vertex> witness) {
    rep.holds = false;
    rep.clause = clause;
    rep.message = std::move(msg);
    rep.witness = std::move(witness);
    return rep;
  };
  if (g.size() <= cfg.N0) throw ValidationError(fmt::format("graph on {} vertices does not exceed N0={}", g.size(), cfg.N0));
  const std::int64_t far = 3 * cfg.a;

  // (1) short cycles above n0 are pairwise far apart
  std::vector<CycleRecord> cycles;
  for (const auto& c : find_cycles(g, clamp_radius(std::max<std::int64_t>(3, cfg.a))))
    if (c.min_vertex > cfg.n0) cycles.push_back(c);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    std::vector<Vertex> rest;
    for (std::size_t j = i + 1; j < cycles.size(); ++j) rest.insert(rest.end(), cycles[j].vertices.begin(), cycles[j].vertices.end());
    const int dist = set_distance(g, cycles[i].vertices, rest, far - 1);
    if (dist >= 0) {
      std::vector<Vertex> w = cycles[i].vertices;
      return fail(1, fmt::format("a cycle of length {} lies within distance {} < {} of another short cycle",
                                 cycles[i].length, dist, far),
                  w);
    }
  }
  // (2) vertices beyond N0 are far from [n0]
  const auto inner = prefix(cfg.n0, g);
  if (!inner.empty()) {
    LocalBfs bfs(g);
    for (Vertex v : bfs.run(inner, clamp_radius(far - 1)))
      if (v > cfg.N0)
        return fail(2, fmt::format("vertex {} is at distance {} < {} from [n0]", v, bfs.distance(v), far), {v});
  }
  // (3) the core is saturated
  for (Vertex v : prefix(cfg.N0, g))
    if (g.degree(v) != static_cast<std::size_t>(cfg.d))
      return fail(3, fmt::format("vertex {} of [N0] has degree {} instead of {}", v, g.degree(v), cfg.d), {v});
  // (4) every admissible tree type and complete a-graph has R far-apart copies
  const auto want = static_cast<std::size_t>(cfg.R);
  for (int b = 1; b <= cfg.a; ++b) {
    const std::size_t count = count_max_admissible(cfg.m, cfg.d, b);
    if (count > cfg.type_guard)
      return fail(4, fmt::format("depth {} admits {} tree types, beyond the enumeration guard {}; the clause cannot be "
                                 "confirmed",
                                 b, count, cfg.type_guard),
                  {});
    std::map<std::string, std::vector<std::vector<Vertex>>> by_code;
    for (auto& c : tree_copies(g, b)) by_code[c.code].push_back(std::move(c.vertices));
    for (const auto& t : enumerate_max_admissible(cfg.m, cfg.d, b, cfg.type_guard)) {
      const auto it = by_code.find(t.code);
      const std::size_t got = it == by_code.end() ? 0 : far_apart_copies(g, it->second, cfg, want).size();
      if (got < want)
        return fail(4, fmt::format("tree type {} of depth {} has {} far-apart maximal copies, need {}", t.code, b, got, want),
                    {});
    }
  }
  if (cfg.m >= 2) {
    std::map<int, std::vector<std::vector<Vertex>>> complete_by_len;
    for (auto& c : a_graph_copies(g, cfg, clamp_radius(cfg.a)))
      if (c.type.complete) complete_by_len[c.type.cycle_length].push_back(std::move(c.vertices));
    for (int len = 3; len <= cfg.a; ++len) {
      const auto it = complete_by_len.find(len);
      const std::size_t got = it == complete_by_len.end() ? 0 : far_apart_copies(g, it->second, cfg, want).size();
      if (got < want)
        return fail(4, fmt::format("complete a-graph with a {}-cycle has {} far-apart copies, need {}", len, got, want), {});
    }
  }
  return rep;
}

PropertyReport check_Q2(const Graph& g1, const Graph& g2, const GameConfig& cfg) {
  if (!(g1.size() > g2.size() && g2.size() > cfg.N0))
    throw ValidationError(fmt::format("Q2 needs n1 > n2 > N0, got n1={} n2={} N0={}", g1.size(), g2.size(), cfg.N0));
  for (Vertex u = 1; u <= cfg.N0; ++u)
    for (Vertex v = u + 1; v <= cfg.N0; ++v)
      if (g1.has_edge(u, v) != g2.has_edge(u, v))
        throw ValidationError(fmt::format("restrictions to [N0] differ at edge ({}, {})", u, v));
  PropertyReport rep;
  const int depth = clamp_radius(cfg.a);
  std::map<std::string, std::vector<std::vector<Vertex>>> copies[2];
  const Graph* gs[2] = {&g1, &g2};
  for (int s = 0; s < 2; ++s)
    for (auto& c : a_graph_copies(*gs[s], cfg, depth))
      if (!c.type.complete) copies[s][c.type.code].push_back(std::move(c.vertices));
  std::set<std::string> codes;
  for (const auto& cs : copies)
    for (const auto& [code, list] : cs) codes.insert(code);
  const auto want = static_cast<std::size_t>(cfg.R);
  for (const auto& code : codes) {
    const auto& a = copies[0][code];
    const auto& b = copies[1][code];
    if (a.size() == b.size()) continue;
    const std::size_t fa = far_apart_copies(g1, a, cfg, want).size();
    const std::size_t fb = far_apart_copies(g2, b, cfg, want).size();
    if (fa >= want && fb >= want) continue;
    rep.holds = false;
    rep.clause = 1;
    rep.message = fmt::format("a-graph {} occurs {} and {} times with {} and {} far-apart copies (need {})", code,
                              a.size(), b.size(), fa, fb, want);
    return rep;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Isomorphism search

bool is_partial_isomorphism(const Graph& g, const Graph& h, const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [x, y] = pairs[i];
    if (!g.contains(x) || !h.contains(y)) return false;
    for (std::size_t j = 0; j < i; ++j) {
      const auto [x2, y2] = pairs[j];
      if ((x == x2) != (y == y2)) return false;
      if (x != x2 && g.has_edge(x, x2) != h.has_edge(y, y2)) return false;
    }
  }
  return true;
}

std::optional<std::map<Vertex, Vertex>> find_isomorphism(const Graph& g, const std::vector<Vertex>& a, const Graph& h,
                                                         const std::vector<Vertex>& b,
                                                         const std::map<Vertex, Vertex>& fixed,
                                                         const std::map<Vertex, int>& color_a,
                                                         const std::map<Vertex, int>& color_b) {
  if (a.size() != b.size()) return std::nullopt;
  const std::set<Vertex> in_a(a.begin(), a.end()), in_b(b.begin(), b.end());
  for (const auto& [u, v] : fixed)
    if (!in_a.count(u) || !in_b.count(v)) return std::nullopt;
  auto nbrs = [](const Graph& gr, const std::set<Vertex>& in, Vertex v) {
    std::vector<Vertex> out;
    for (Vertex u : gr.neighbors(v))
      if (in.count(u)) out.push_back(u);
    return out;
  };
  // joint colour refinement: a necessary condition and a candidate filter
  std::map<Vertex, int> ca, cb;
  std::map<std::vector<int>, int> dict;
  auto intern = [&](std::vector<int> sig) {
    const auto it = dict.find(sig);
    if (it != dict.end()) return it->second;
    const int id = static_cast<int>(dict.size());
    dict.emplace(std::move(sig), id);
    return id;
  };
  std::map<Vertex, int> fixed_rank_a, fixed_rank_b;
  {
    int r = 1;
    for (const auto& [u, v] : fixed) {
      fixed_rank_a[u] = r;
      fixed_rank_b[v] = r;
      ++r;
    }
  }
  auto initial = [&](const std::map<Vertex, int>& color, const std::map<Vertex, int>& rank, Vertex v) {
    const auto c = color.find(v);
    const auto f = rank.find(v);
    return intern({-1, c == color.end() ? 0 : c->second, f == rank.end() ? 0 : f->second});
  };
  for (Vertex v : a) ca[v] = initial(color_a, fixed_rank_a, v);
  for (Vertex v : b) cb[v] = initial(color_b, fixed_rank_b, v);
  for (std::size_t iter = 0; iter < a.size() + 1; ++iter) {
    std::map<Vertex, int> na, nb;
    dict.clear();
    auto refine = [&](const Graph& gr, const std::set<Vertex>& in, std::map<Vertex, int>& col, std::map<Vertex, int>& next) {
      for (const auto& [v, c] : col) {
        std::vector<int> sig{c};
        std::vector<int> around;
        for (Vertex u : nbrs(gr, in, v)) around.push_back(col.at(u));
        std::sort(around.begin(), around.end());
        sig.insert(sig.end(), around.begin(), around.end());
        next[v] = intern(std::move(sig));
      }
    };
    refine(g, in_a, ca, na);
    refine(h, in_b, cb, nb);
    auto classes = [](const std::map<Vertex, int>& m) {
      std::set<int> s;
      for (const auto& [v, c] : m) s.insert(c);
      return s.size();
    };
    const bool stable = classes(na) == classes(ca) && classes(nb) == classes(cb);
    ca.swap(na);
    cb.swap(nb);
    if (stable) break;
  }
  {
    std::map<int, int> hist;
    for (const auto& [v, c] : ca) ++hist[c];
    for (const auto& [v, c] : cb) --hist[c];
    for (const auto& [c, k] : hist)
      if (k != 0) return std::nullopt;
  }
  for (const auto& [u, v] : fixed)
    if (ca.at(u) != cb.at(v)) return std::nullopt;

  // order: fixed vertices, then breadth-first through the region
  std::vector<Vertex> order;
  std::set<Vertex> placed;
  for (const auto& [u, v] : fixed) {
    order.push_back(u);
    placed.insert(u);
  }
  for (std::size_t i = 0; order.size() < a.size();) {
    if (i == order.size()) {
      for (Vertex v : a)
        if (!placed.count(v)) {
          order.push_back(v);
          placed.insert(v);
          break;
        }
    }
    for (Vertex u : nbrs(g, in_a, order[i]))
      if (placed.insert(u).second) order.push_back(u);
    ++i;
  }
  std::map<Vertex, Vertex> map = fixed;
  std::set<Vertex> used;
  for (const auto& [u, v] : fixed) used.insert(v);
  std::size_t budget = 2'000'000;
  std::function<bool(std::size_t)> extend = [&](std::size_t pos) -> bool {
    if (pos == order.size()) return true;
    const Vertex u = order[pos];
    if (pos < fixed.size()) {
      const Vertex v = fixed.at(u);
      for (std::size_t k = 0; k < pos; ++k)
        if (g.has_edge(u, order[k]) != h.has_edge(v, map.at(order[k]))) return false;
      return extend(pos + 1);
    }
    for (Vertex v : b) {
      if (used.count(v) || cb.at(v) != ca.at(u)) continue;
      if (budget-- == 0) throw GuardExceeded("isomorphism search budget exhausted");
      bool ok = true;
      for (std::size_t k = 0; k < pos && ok; ++k)
        if (g.has_edge(u, order[k]) != h.has_edge(v, map.at(order[k]))) ok = false;
      if (!ok) continue;
      map[u] = v;
      used.insert(v);
      if (extend(pos + 1)) return true;
      map.erase(u);
      used.erase(v);
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return map;
}

// ---------------------------------------------------------------------------
// Strategy

nlohmann::json MoveRecord::to_json() const {
  return {{"round", round}, {"side", side + 1}, {"vertex", vertex}, {"reply", reply},
          {"case", strategy_case}, {"invariant_ok", invariant_ok}, {"note", note}};
}

DuplicatorStrategy::DuplicatorStrategy(const Graph& g1, const Graph& g2, GameConfig cfg, bool verify)
    : g_{&g1, &g2}, cfg_(cfg) {
  for (Vertex u = 1; u <= cfg_.N0; ++u) {
    if (!g1.contains(u) || !g2.contains(u)) throw ValidationError("both graphs must contain [N0]");
    for (Vertex v = u + 1; v <= cfg_.N0; ++v)
      if (g1.has_edge(u, v) != g2.has_edge(u, v))
        throw ValidationError(fmt::format("restrictions to [N0] differ at edge ({}, {})", u, v));
  }
  if (verify) {
    q1_[0] = check_Q1(g1, cfg_);
    q1_[1] = check_Q1(g2, cfg_);
    q2_ = g1.size() > g2.size() ? check_Q2(g1, g2, cfg_) : check_Q2(g2, g1, cfg_);
  }
  for (int s = 0; s < 2; ++s) kernels_[s] = noncomplete_kernels(*g_[s], cfg_);
}

std::vector<Vertex> DuplicatorStrategy::kernels_near(int side, Vertex x, std::int64_t r) const {
  std::vector<Vertex> out;
  LocalBfs bfs(*g_[side]);
  bfs.run(x, clamp_radius(r));
  for (const auto& c : kernels_[side])
    if (std::any_of(c.vertices.begin(), c.vertices.end(), [&](Vertex v) { return bfs.reached(v); }))
      out.insert(out.end(), c.vertices.begin(), c.vertices.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Vertex> DuplicatorStrategy::region(int side, const std::vector<Vertex>& kernel, Vertex x,
                                               std::int64_t r) const {
  std::vector<Vertex> src = kernel;
  src.push_back(x);
  return ball_of(*g_[side], src, r);
}

int DuplicatorStrategy::core_distance(int side, Vertex x, std::int64_t limit) const {
  if (cfg_.n0 == 0) return -1;
  return set_distance(*g_[side], {x}, prefix(cfg_.n0, *g_[side]), limit);
}

MoveRecord DuplicatorStrategy::respond(MatchState& state, int side, Vertex x) const {
  if (side != 0 && side != 1) throw ValidationError("side must be 0 or 1");
  if (!g_[side]->contains(x)) throw ValidationError(fmt::format("vertex {} is not in graph {}", x, side + 1));
  const int i = state.round + 1;
  if (i > cfg_.R) throw ValidationError("all rounds have been played");
  const std::int64_t r = cfg_.radius(i);
  const int o = 1 - side;
  const Graph& gs = *g_[side];
  const Graph& go = *g_[o];

  PebbleRound pr;
  pr.side = side;
  pr.v[side] = x;
  pr.kernel[side] = kernels_near(side, x, r);
  const std::vector<Vertex> area = region(side, pr.kernel[side], x, r);
  pr.region[side] = area;
  std::map<Vertex, Vertex> phi;  // side -> other
  MoveRecord rec;
  rec.round = i;
  rec.side = side;
  rec.vertex = x;

  if (core_distance(side, x, r) >= 0) {
    // case 1: near the common core, copy the vertex
    pr.strategy_case = 1;
    if (!go.contains(x)) throw PropertyViolation(fmt::format("vertex {} near [n0] is missing from the other graph", x));
    pr.v[o] = x;
    pr.kernel[o] = kernels_near(o, x, r);
    pr.region[o] = region(o, pr.kernel[o], x, r);
    for (Vertex v : area) phi[v] = v;
  } else {
    int latest = -1;
    for (int j = static_cast<int>(state.rounds.size()) - 1; j >= 0 && latest < 0; --j)
      if (std::binary_search(area.begin(), area.end(), state.rounds[j].v[side])) latest = j;
    if (latest >= 0) {
      // case 2: inside an earlier pebble's region, reuse its isomorphism
      pr.strategy_case = 2;
      const PebbleRound& prev = state.rounds[static_cast<std::size_t>(latest)];
      std::map<Vertex, Vertex> prev_phi;
      if (side == 0) prev_phi = prev.phi;
      else
        for (const auto& [u, v] : prev.phi) prev_phi[v] = u;
      for (Vertex v : area) {
        const auto it = prev_phi.find(v);
        if (it == prev_phi.end())
          throw PropertyViolation(fmt::format("round {}: region of {} leaves the region of round {}", i, x, latest + 1));
        phi[v] = it->second;
      }
      pr.v[o] = phi.at(x);
      pr.kernel[o] = kernels_near(o, pr.v[o], r);
      pr.region[o] = region(o, pr.kernel[o], pr.v[o], r);
    } else {
      // case 3: fresh territory, find an isomorphic far copy
      pr.strategy_case = 3;
      std::map<Vertex, int> color_s;
      for (Vertex v : pr.kernel[side]) color_s[v] = 1;
      const std::int64_t top = std::int64_t{1} << cfg_.R;
      const int x_kernel_core =
          pr.kernel[side].empty() || cfg_.n0 == 0 ? -1
                                                  : set_distance(gs, pr.kernel[side], prefix(cfg_.n0, gs), top);
      bool found = false;
      for (Vertex y = 1; y <= go.size() && !found; ++y) {
        if (core_distance(o, y, r) >= 0) continue;
        auto yk = kernels_near(o, y, r);
        if (yk.size() != pr.kernel[side].size()) continue;
        auto reg = region(o, yk, y, r);
        if (reg.size() != area.size()) continue;
        bool clear = true;
        for (const auto& prev : state.rounds) {
          if (std::binary_search(reg.begin(), reg.end(), prev.v[o])) clear = false;
          if (!clear || yk.empty()) continue;
          const std::int64_t rj = cfg_.radius(static_cast<int>(&prev - state.rounds.data()) + 1);
          if (set_distance(go, yk, {prev.v[o]}, rj) >= 0) clear = false;
          if (!prev.kernel[o].empty() && set_distance(go, yk, prev.kernel[o], 2 * cfg_.a - 1) >= 0) clear = false;
        }
        if (!clear) continue;
        if (!yk.empty() && cfg_.n0 > 0) {
          const int y_core = set_distance(go, yk, prefix(cfg_.n0, go), top);
          const bool far_enough = y_core < 0 || (x_kernel_core >= 0 && y_core >= x_kernel_core);
          if (!far_enough) continue;
        }
        std::map<Vertex, int> color_o;
        for (Vertex v : yk) color_o[v] = 1;
        const auto iso = find_isomorphism(gs, area, go, reg, {{x, y}}, color_s, color_o);
        if (!iso) continue;
        phi = *iso;
        pr.v[o] = y;
        pr.kernel[o] = std::move(yk);
        pr.region[o] = std::move(reg);
        found = true;
      }
      if (!found) throw PropertyViolation(fmt::format("round {}: no isomorphic far copy for vertex {}", i, x));
    }
  }
  if (side == 0) pr.phi = std::move(phi);
  else
    for (const auto& [u, v] : phi) pr.phi[v] = u;
  rec.reply = pr.v[o];
  rec.strategy_case = pr.strategy_case;
  state.rounds.push_back(std::move(pr));
  state.round = i;
  std::string why;
  rec.invariant_ok = invariant(state, &why);
  rec.note = why;
  return rec;
}

bool DuplicatorStrategy::invariant(const MatchState& state, std::string* why) const {
  auto bad = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (const auto& pr : state.rounds) pairs.emplace_back(pr.v[0], pr.v[1]);
  if (!is_partial_isomorphism(*g_[0], *g_[1], pairs)) return bad("pebble map is not a partial isomorphism");
  for (std::size_t j = 0; j < state.rounds.size(); ++j) {
    const PebbleRound& pr = state.rounds[j];
    const auto& a = pr.region[0];
    const auto& b = pr.region[1];
    if (a.size() != b.size() || pr.phi.size() != a.size())
      return bad(fmt::format("round {}: regions of sizes {} and {} with a map of size {}", j + 1, a.size(), b.size(),
                             pr.phi.size()));
    std::set<Vertex> image;
    for (const auto& [u, v] : pr.phi) {
      if (!std::binary_search(a.begin(), a.end(), u) || !std::binary_search(b.begin(), b.end(), v))
        return bad(fmt::format("round {}: map leaves the regions", j + 1));
      image.insert(v);
    }
    if (image.size() != b.size()) return bad(fmt::format("round {}: map is not a bijection", j + 1));
    for (const auto& [u, v] : pr.phi)
      for (const auto& [u2, v2] : pr.phi)
        if (u < u2 && g_[0]->has_edge(u, u2) != g_[1]->has_edge(v, v2))
          return bad(fmt::format("round {}: map is not an isomorphism", j + 1));
    const std::set<Vertex> ka(pr.kernel[0].begin(), pr.kernel[0].end());
    const std::set<Vertex> kb(pr.kernel[1].begin(), pr.kernel[1].end());
    for (const auto& [u, v] : pr.phi)
      if (ka.count(u) != kb.count(v)) return bad(fmt::format("round {}: kernels are not preserved", j + 1));
    for (std::size_t k = 0; k <= j; ++k) {
      const bool in_a = std::binary_search(a.begin(), a.end(), state.rounds[k].v[0]);
      const bool in_b = std::binary_search(b.begin(), b.end(), state.rounds[k].v[1]);
      if (in_a != in_b) return bad(fmt::format("round {}: pebble {} is inside only one region", j + 1, k + 1));
      if (in_a && pr.phi.at(state.rounds[k].v[0]) != state.rounds[k].v[1])
        return bad(fmt::format("round {}: map does not send pebble {} to its partner", j + 1, k + 1));
    }
  }
  return true;
}

AdversaryResult exhaustive_adversary(const DuplicatorStrategy& s, int rounds, std::size_t transcript_limit,
                                     std::vector<MoveRecord>* transcript) {
  AdversaryResult res;
  std::vector<MoveRecord> play;
  std::function<void(MatchState&, int)> rec = [&](MatchState& st, int left) {
    if (left == 0) {
      ++res.plays;
      if (transcript && res.plays <= transcript_limit) transcript->insert(transcript->end(), play.begin(), play.end());
      return;
    }
    for (int side = 0; side < 2; ++side) {
      const std::size_t n = side == 0 ? s.graph(0).size() : s.graph(1).size();
      for (Vertex x = 1; x <= n; ++x) {
        MatchState next = st;
        MoveRecord mv;
        try {
          mv = s.respond(next, side, x);
        } catch (const PropertyViolation& e) {
          ++res.plays;
          ++res.strategy_failures;
          mv.round = st.round + 1;
          mv.side = side;
          mv.vertex = x;
          mv.note = e.what();
          if (res.first_bad_play.empty()) {
            res.first_bad_play = play;
            res.first_bad_play.push_back(mv);
          }
          continue;
        }
        play.push_back(mv);
        if (!mv.invariant_ok) {
          ++res.plays;
          std::vector<std::pair<Vertex, Vertex>> pairs;
          for (const auto& pr : next.rounds) pairs.emplace_back(pr.v[0], pr.v[1]);
          if (!is_partial_isomorphism(s.graph(0), s.graph(1), pairs)) ++res.losses;
          else ++res.strategy_failures;
          if (res.first_bad_play.empty()) res.first_bad_play = play;
        } else {
          rec(next, left - 1);
        }
        play.pop_back();
      }
    }
  };
  MatchState st;
  rec(st, rounds);
  return res;
}

// ---------------------------------------------------------------------------
// Small graphs

Graph graph_from_edges(std::size_t n, const std::vector<Edge>& edges, std::size_t degree_cap) {
  Graph g(degree_cap);
  for (std::size_t i = 0; i < n; ++i) g.add_vertex();
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 2; v <= n; ++v) e.emplace_back(v - 1, v);
  return graph_from_edges(n, e);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw ValidationError("a cycle needs at least 3 vertices");
  std::vector<Edge> e;
  for (Vertex v = 2; v <= n; ++v) e.emplace_back(v - 1, v);
  e.emplace_back(1, static_cast<Vertex>(n));
  return graph_from_edges(n, e);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> e = a.edges();
  const auto shift = static_cast<Vertex>(a.size());
  for (const auto& [u, v] : b.edges()) e.emplace_back(u + shift, v + shift);
  return graph_from_edges(a.size() + b.size(), e, std::max(a.degree_cap(), b.degree_cap()));
}

}  // namespace uagraph
