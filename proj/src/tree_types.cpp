#include "uagraph/tree_types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "uagraph/error.hpp"
#include "uagraph/parallel.hpp"

namespace uagraph {

// ---------------------------------------------------------------------------
// RootedTree

int RootedTree::add_child(int parent) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= children_.size())
    throw ValidationError(fmt::format("unknown tree node {}", parent));
  children_.emplace_back();
  parent_.push_back(parent);
  const int id = static_cast<int>(children_.size()) - 1;
  children_[parent].push_back(id);
  return id;
}

int RootedTree::depth_of(int node) const {
  int depth = 0;
  for (int v = node; parent_[v] >= 0; v = parent_[v]) ++depth;
  return depth;
}

int RootedTree::height() const {
  std::vector<int> depth(size(), 0);
  int best = 0;
  for (std::size_t v = 1; v < size(); ++v) {
    depth[v] = depth[parent_[v]] + 1;  // parents are created before children
    best = std::max(best, depth[v]);
  }
  return best;
}

RootedTree RootedTree::from_code(std::string_view code) {
  if (code.size() < 2 || code.front() != '(' || code.back() != ')')
    throw ValidationError(fmt::format("malformed tree code '{}'", code));
  RootedTree t;
  std::vector<int> stack{0};
  for (std::size_t i = 1; i + 1 < code.size(); ++i) {
    if (code[i] == '(') {
      stack.push_back(t.add_child(stack.back()));
    } else if (code[i] == ')') {
      if (stack.size() <= 1) throw ValidationError(fmt::format("malformed tree code '{}'", code));
      stack.pop_back();
    } else {
      throw ValidationError(fmt::format("malformed tree code '{}'", code));
    }
  }
  if (stack.size() != 1) throw ValidationError(fmt::format("malformed tree code '{}'", code));
  return t;
}

RootedTree RootedTree::from_edges(std::size_t n, const std::vector<std::pair<int, int>>& edges, int root) {
  if (n == 0 || root < 0 || static_cast<std::size_t>(root) >= n) throw ValidationError("bad root");
  if (edges.size() + 1 != n) throw ValidationError("edge count does not match a tree");
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n || u == v)
      throw ValidationError("bad tree edge");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  RootedTree t;
  std::vector<int> id(n, -1);
  std::vector<int> queue{root};
  id[root] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (int u : adj[v]) {
      if (id[u] >= 0) continue;
      id[u] = t.add_child(id[v]);
      queue.push_back(u);
    }
  }
  if (queue.size() != n) throw ValidationError("edges do not form a connected tree (cycle present)");
  return t;
}

// ---------------------------------------------------------------------------
// Codes and order

std::vector<std::string_view> child_codes(std::string_view code) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 1; i + 1 < code.size(); ++i) {
    if (code[i] == '(') {
      if (depth++ == 0) start = i;
    } else if (--depth == 0) {
      out.push_back(code.substr(start, i - start + 1));
    }
  }
  return out;
}

int compare_codes(std::string_view a, std::string_view b) {
  if (a == b) return 0;
  const auto ca = child_codes(a);
  const auto cb = child_codes(b);
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (const int r = compare_codes(ca[i], cb[i]); r != 0) return r;
  return a < b ? -1 : 1;  // only reachable for non-canonical input
}

namespace {

bool code_greater(const std::string& a, const std::string& b) { return compare_codes(a, b) > 0; }

std::string join_children(std::vector<std::string>& kids) {
  std::sort(kids.begin(), kids.end(), code_greater);
  std::size_t len = 2;
  for (const auto& k : kids) len += k.size();
  std::string s;
  s.reserve(len);
  s.push_back('(');
  for (const auto& k : kids) s += k;
  s.push_back(')');
  return s;
}

// Codes for every node, keeping each node's own code intact.
std::vector<std::string> node_codes(const RootedTree& t) {
  std::vector<std::string> code(t.size());
  for (std::size_t i = t.size(); i-- > 0;) {
    std::vector<std::string> kids;
    for (int c : t.children(static_cast<int>(i))) kids.push_back(code[c]);
    code[i] = join_children(kids);
  }
  return code;
}

}  // namespace

std::string canonical_code(const RootedTree& tree, int node) {
  return node_codes(tree).at(static_cast<std::size_t>(node));
}

TreeType make_type(std::string code, int depth) {
  TreeType t;
  t.depth = depth;
  t.size = static_cast<std::size_t>(std::count(code.begin(), code.end(), '('));
  t.root_degree = static_cast<int>(child_codes(code).size());
  t.code = std::move(code);
  return t;
}

std::strong_ordering compare(const TreeType& a, const TreeType& b) {
  if (a.depth != b.depth) throw ValidationError(fmt::format("cannot order types of depth {} and {}", a.depth, b.depth));
  const int r = compare_codes(a.code, b.code);
  return r < 0 ? std::strong_ordering::less : r > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::size_t orbit_factor(const RootedTree& tree, int node) {
  const auto code = node_codes(tree);
  std::vector<std::string> sig(tree.size());
  sig[0] = code[0];
  for (std::size_t v = 1; v < tree.size(); ++v) sig[v] = sig[tree.parent(static_cast<int>(v))] + "|" + code[v];
  return static_cast<std::size_t>(std::count(sig.begin(), sig.end(), sig[node]));
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// A subtree hanging below its parent, with the arrival directions its edge to
// the parent can take: `up` when the parent is the older end, `down` when the
// subtree root is the older end.
struct Branch {
  std::string code;
  bool up = true;
  bool down = true;
};

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

// Multisets of size s from n kinds.
std::uint64_t multichoose(std::uint64_t n, std::uint64_t s) {
  if (s == 0) return 1;
  if (n == 0) return 0;
  // C(n+s-1, s) computed with saturation
  long double r = 1;
  for (std::uint64_t i = 1; i <= s; ++i) r = r * static_cast<long double>(n + s - i) / static_cast<long double>(i);
  if (r > 1.8e19L) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::llround(r));
}

struct Categories {
  std::uint64_t up_only = 0, down_only = 0, both = 0;
};

Categories categorize(const std::vector<Branch>& bs) {
  Categories c;
  for (const auto& b : bs) {
    if (b.up && b.down) ++c.both;
    else if (b.up) ++c.up_only;
    else if (b.down) ++c.down_only;
  }
  return c;
}

// Number of child multisets of size s whose "older children" count can equal
// one of the targets.
std::uint64_t count_feasible(const Categories& c, int s, std::vector<int> targets) {
  std::uint64_t total = 0;
  for (int b = 0; b <= s; ++b)
    for (int x = 0; x + b <= s; ++x) {
      const int a = s - b - x;  // up-only, b down-only, x both
      bool ok = false;
      for (int t : targets) ok = ok || (b <= t && t <= b + x);
      if (!ok) continue;
      total = sat_add(total, sat_mul(sat_mul(multichoose(c.up_only, a), multichoose(c.down_only, b)),
                                     multichoose(c.both, x)));
    }
  return total;
}

template <class Fn>
void for_each_child_multiset(std::size_t kinds, int s, Fn&& fn) {
  if (s == 0) {
    fn(std::vector<int>{});
    return;
  }
  if (kinds == 0) return;
  std::vector<int> idx(static_cast<std::size_t>(s), 0);
  for (;;) {
    fn(idx);
    int pos = s - 1;
    while (pos >= 0 && idx[pos] == static_cast<int>(kinds) - 1) --pos;
    if (pos < 0) return;
    const int v = idx[pos] + 1;
    for (int i = pos; i < s; ++i) idx[i] = v;
  }
}

// lo = children that must be older than their parent, hi = children that may be.
std::pair<int, int> older_window(const std::vector<Branch>& bs, const std::vector<int>& idx, bool& dead) {
  int lo = 0, hi = 0;
  dead = false;
  for (int i : idx) {
    const Branch& b = bs[i];
    if (!b.up && !b.down) dead = true;
    if (b.down) ++hi;
    if (b.down && !b.up) ++lo;
  }
  return {lo, hi};
}

std::string concat(const std::vector<Branch>& bs, const std::vector<int>& idx) {
  std::string s = "(";
  for (int i : idx) s += bs[i].code;
  s += ')';
  return s;
}

// Branch lists for budgets 0..b-1, each sorted in decreasing tree order.
std::vector<std::vector<Branch>> branch_levels(int m, int d, int b, bool orient, std::size_t guard) {
  std::vector<std::vector<Branch>> levels;
  levels.push_back({Branch{"()", true, true}});
  for (int h = 1; h < b; ++h) {
    const auto& prev = levels.back();
    std::uint64_t bound = 0;
    for (int s = std::max(m - 1, 0); s <= d - 1; ++s) bound = sat_add(bound, multichoose(prev.size(), s));
    if (bound > guard * 64)
      throw GuardExceeded(fmt::format("depth-{} branch enumeration would visit {} candidates", h, bound));
    std::vector<Branch> next;
    for (int s = std::max(m - 1, 0); s <= d - 1; ++s) {
      for_each_child_multiset(prev.size(), s, [&](const std::vector<int>& idx) {
        Branch br;
        br.code = concat(prev, idx);
        if (orient) {
          bool dead = false;
          const auto [lo, hi] = older_window(prev, idx, dead);
          br.up = !dead && lo <= m - 1 && m - 1 <= hi;
          br.down = !dead && lo <= m && m <= hi;
          if (!br.up && !br.down) return;
        }
        next.push_back(std::move(br));
      });
    }
    std::sort(next.begin(), next.end(), [](const Branch& x, const Branch& y) { return code_greater(x.code, y.code); });
    levels.push_back(std::move(next));
  }
  return levels;
}

std::vector<TreeType> enumerate(int m, int d, int b, bool orient, std::size_t guard) {
  if (m < 1 || d <= 2 * m) throw ValidationError(fmt::format("(m, d) = ({}, {}) is outside the model", m, d));
  if (b < 1) throw ValidationError("depth must be at least 1");
  const auto levels = branch_levels(m, d, b, orient, guard);
  const auto& kids = levels.back();
  std::uint64_t count = 0;
  if (orient) {
    count = count_max_admissible(m, d, b);
  } else {
    for (int s = m; s <= d; ++s) count = sat_add(count, multichoose(kids.size(), s));
  }
  if (count > guard)
    throw GuardExceeded(fmt::format("depth-{} enumeration for (m, d) = ({}, {}) has {} types, above the guard {}", b, m,
                                    d, count, guard));
  std::vector<TreeType> out;
  for (int s = m; s <= d; ++s) {
    for_each_child_multiset(kids.size(), s, [&](const std::vector<int>& idx) {
      if (orient) {
        bool dead = false;
        const auto [lo, hi] = older_window(kids, idx, dead);
        if (dead || lo > m || hi < m) return;
      }
      out.push_back(make_type(concat(kids, idx), b));
    });
  }
  std::sort(out.begin(), out.end(), [](const TreeType& x, const TreeType& y) { return compare_codes(x.code, y.code) < 0; });
  return out;
}

}  // namespace

std::size_t count_max_admissible(int m, int d, int b) {
  if (m < 1 || d <= 2 * m) throw ValidationError(fmt::format("(m, d) = ({}, {}) is outside the model", m, d));
  if (b < 1) throw ValidationError("depth must be at least 1");
  // Category counts per level are enough to count, but the categories of a
  // level depend on the members of the previous one, so branches are built
  // explicitly up to depth b-1 (bounded separately inside branch_levels).
  const auto levels = branch_levels(m, d, b, true, std::numeric_limits<std::size_t>::max() / 128);
  const Categories c = categorize(levels.back());
  std::uint64_t total = 0;
  for (int s = m; s <= d; ++s) total = sat_add(total, count_feasible(c, s, {m}));
  return static_cast<std::size_t>(total);
}

std::vector<TreeType> enumerate_degree_constrained(int m, int d, int b, std::size_t guard) {
  return enumerate(m, d, b, false, guard);
}

std::vector<TreeType> enumerate_max_admissible(int m, int d, int b, std::size_t guard) {
  return enumerate(m, d, b, true, guard);
}

// ---------------------------------------------------------------------------
// Census

namespace {

struct BallCoder {
  explicit BallCoder(const Graph& g) : bfs(g), slot(g.size() + 1, -1) {}

  // Returns false when the ball is not a tree.
  bool code(Vertex root, int radius, std::string& out) {
    const auto order = bfs.run(root, radius);
    if (bfs.induced_edge_count() + 1 != order.size()) return false;
    codes.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) slot[order[i]] = static_cast<int>(i);
    const Graph& g = bfs.graph();
    for (std::size_t i = order.size(); i-- > 0;) {
      const Vertex v = order[i];
      kids.clear();
      const int dv = bfs.distance(v);
      if (dv < radius)
        for (Vertex u : g.neighbors(v))
          if (bfs.distance(u) == dv + 1) kids.push_back(std::move(codes[slot[u]]));
      codes[i] = join_children(kids);
    }
    for (Vertex v : order) slot[v] = -1;
    out = std::move(codes[0]);
    return true;
  }

  LocalBfs bfs;
  std::vector<int> slot;
  std::vector<std::string> codes;
  std::vector<std::string> kids;
};

}  // namespace

std::string ball_code(const Graph& g, Vertex root, int radius) {
  if (!g.contains(root)) throw ValidationError(fmt::format("unknown vertex {}", root));
  BallCoder coder(g);
  std::string out;
  if (!coder.code(root, radius, out)) throw ValidationError(fmt::format("ball of radius {} around {} is not a tree", radius, root));
  return out;
}

TreeCensus census_trees(const Graph& g, int b, int jobs) {
  if (b < 1) throw ValidationError("census depth must be at least 1");
  TreeCensus census;
  census.depth = b;
  census.n = g.size();
  const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::unordered_map<std::string, std::size_t>> partial(workers);
  std::vector<std::size_t> excluded(workers, 0);
  const std::size_t chunk = (g.size() + workers - 1) / workers;
  parallel_for(workers, jobs, [&](std::size_t w) {
    BallCoder coder(g);
    std::string code;
    const std::size_t begin = w * chunk + 1;
    const std::size_t end = std::min(g.size(), (w + 1) * chunk);
    for (std::size_t v = begin; v <= end; ++v) {
      if (coder.code(static_cast<Vertex>(v), b, code)) ++partial[w][code];
      else ++excluded[w];
    }
  });
  for (std::size_t w = 0; w < workers; ++w) {
    for (auto& [code, count] : partial[w]) census.counts[code] += count;
    census.excluded += excluded[w];
  }
  return census;
}

// ---------------------------------------------------------------------------
// Fixed point

double TreeFixedPoint::density(int depth, const std::string& code) const {
  const TreeLayer& l = layer(depth);
  const auto it = l.index.find(code);
  return it == l.index.end() ? 0.0 : l.rho[it->second];
}

std::vector<std::pair<std::string, double>> open_type_law(const TreeFixedPoint& fp, int depth) {
  if (depth == 0) return {{"()", 1.0}};
  const TreeLayer& l = fp.layer(depth);
  const double closed = 1.0 - fp.degrees.rho_d();
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < l.types.size(); ++i)
    if (l.types[i].root_degree < fp.d) out.emplace_back(l.types[i].code, l.rho[i] / closed);
  return out;
}

namespace {

void graft(RootedTree& t, int parent, std::string_view code) {
  const int root = t.add_child(parent);
  std::vector<int> stack{root};
  for (std::size_t i = 1; i + 1 < code.size(); ++i) {
    if (code[i] == '(') stack.push_back(t.add_child(stack.back()));
    else stack.pop_back();
  }
}

RootedTree copy_tree(std::string_view code) { return RootedTree::from_code(code); }

}  // namespace

TreeFixedPoint solve_tree_fixed_point(int m, int d, int b, double tol, std::size_t guard) {
  if (b < 1) throw ValidationError("depth must be at least 1");
  TreeFixedPoint fp;
  fp.m = m;
  fp.d = d;
  fp.degrees = solve_rho(m, d);
  const double q = m / (1.0 - fp.degrees.rho_d());  // attachment rate per open vertex, times n

  for (int i = 1; i <= b; ++i) {
    TreeLayer layer;
    layer.depth = i;
    layer.types = enumerate_max_admissible(m, d, i, guard);
    const auto count = layer.types.size();
    for (std::size_t t = 0; t < count; ++t) layer.index.emplace(layer.types[t].code, static_cast<int>(t));
    layer.creation.assign(count, 0.0);
    layer.out_rate.assign(count, 0.0);

    // Creation: the newcomer's children are m open vertices of depth i-1.
    {
      const auto law = open_type_law(fp, i - 1);
      std::vector<double> w;
      for (const auto& [code, p] : law) w.push_back(p);
      for_each_multiset(w, m, [&](const std::vector<int>& idx, double prob) {
        std::vector<std::string> kids;
        for (int k : idx) kids.push_back(law[k].first);
        const std::string code = join_children(kids);
        const auto it = layer.index.find(code);
        if (it == layer.index.end())
          throw PropertyViolation(fmt::format("creation produced a type outside the enumeration: {}", code));
        layer.creation[it->second] += prob;
        layer.creation_total += prob;
      });
    }

    // Moves: an edge into an open vertex u above depth i; the newcomer's other
    // m-1 edges go to open vertices whose depth-(i-j-2) balls hang below it.
    std::vector<std::vector<std::pair<std::string, double>>> laws(static_cast<std::size_t>(i));
    for (int h = 0; h + 2 <= i; ++h) laws[h] = open_type_law(fp, h);
    std::map<std::pair<int, int>, double> acc;
    for (std::size_t t = 0; t < count; ++t) {
      const RootedTree tree = copy_tree(layer.types[t].code);
      const auto codes = node_codes(tree);
      std::vector<std::string> sig(tree.size());
      std::vector<int> depth(tree.size(), 0);
      sig[0] = codes[0];
      for (std::size_t v = 1; v < tree.size(); ++v) {
        sig[v] = sig[tree.parent(static_cast<int>(v))] + "|" + codes[v];
        depth[v] = depth[tree.parent(static_cast<int>(v))] + 1;
      }
      std::map<std::string, std::pair<int, std::size_t>> orbits;  // signature -> (representative, size)
      for (std::size_t v = 0; v < tree.size(); ++v) {
        auto [it, fresh] = orbits.try_emplace(sig[v], static_cast<int>(v), 0);
        ++it->second.second;
      }
      for (const auto& [s, rep] : orbits) {
        const int u = rep.first;
        const int j = depth[u];
        if (j >= i) continue;  // boundary vertices do not change the ball
        const int degree = static_cast<int>(tree.children(u).size()) + (u == 0 ? 0 : 1);
        if (degree >= d) continue;
        const double orbit = static_cast<double>(rep.second);
        auto add = [&](const std::vector<std::string>& hanging, double prob) {
          RootedTree next = tree;
          const int w = next.add_child(u);
          for (const auto& c : hanging) graft(next, w, c);
          const std::string code = canonical_code(next);
          const auto it = layer.index.find(code);
          if (it == layer.index.end())
            throw PropertyViolation(fmt::format("move produced a type outside the enumeration: {}", code));
          const int target = it->second;
          if (target <= static_cast<int>(t))
            throw PropertyViolation(fmt::format("move from {} to {} does not increase the tree order", layer.types[t].code, code));
          const double rate = orbit * q * prob;
          acc[{target, static_cast<int>(t)}] += rate;
          layer.out_rate[t] += rate;
        };
        if (j == i - 1) {
          add({}, 1.0);
        } else {
          const auto& law = laws[static_cast<std::size_t>(i - j - 2)];
          std::vector<double> w;
          for (const auto& [code, p] : law) w.push_back(p);
          for_each_multiset(w, m - 1, [&](const std::vector<int>& idx, double prob) {
            std::vector<std::string> hanging;
            for (int k : idx) hanging.push_back(law[k].first);
            add(hanging, prob);
          });
        }
      }
    }
    for (const auto& [key, rate] : acc) layer.moves.push_back({key.first, key.second, rate});

    // Forward substitution in tree order: z_t (1 + out_t) = Y_t + sum_{s<t} a_ts z_s.
    layer.rho.assign(count, 0.0);
    std::vector<std::vector<std::pair<int, double>>> incoming(count);
    for (const auto& e : layer.moves) incoming[e.row].emplace_back(e.col, e.rate);
    for (std::size_t t = 0; t < count; ++t) {
      double s = layer.creation[t];
      for (const auto& [src, rate] : incoming[t]) s += rate * layer.rho[src];
      layer.rho[t] = s / (1.0 + layer.out_rate[t]);
    }
    std::vector<double> res(count, 0.0);
    for (std::size_t t = 0; t < count; ++t) res[t] = layer.creation[t] - (1.0 + layer.out_rate[t]) * layer.rho[t];
    for (const auto& e : layer.moves) res[e.row] += e.rate * layer.rho[e.col];
    for (double r : res) layer.residual = std::max(layer.residual, std::abs(r));
    require(layer.residual < tol, fmt::format("depth-{} residual {:.3g} exceeds {:.3g}", i, layer.residual, tol));
    for (std::size_t t = 0; t < count; ++t)
      require(layer.rho[t] > 0, fmt::format("depth-{} type {} has non-positive density {:.17g}", i,
                                             layer.types[t].code, layer.rho[t]));
    fp.layers.push_back(std::move(layer));
  }
  return fp;
}

}  // namespace uagraph
