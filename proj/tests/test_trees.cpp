#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "uagraph/degree_dynamics.hpp"
#include "uagraph/error.hpp"
#include "uagraph/graph.hpp"
#include "uagraph/rng.hpp"
#include "uagraph/tree_types.hpp"

using namespace uagraph;

namespace {

RootedTree random_tree(Rng& rng, std::size_t n) {
  RootedTree t;
  for (std::size_t i = 1; i < n; ++i) t.add_child(static_cast<int>(rng.below(i)));
  return t;
}

// Rooted isomorphism by trying every pairing of children.
bool rooted_iso(const RootedTree& a, int u, const RootedTree& b, int v) {
  const auto& ca = a.children(u);
  const auto& cb = b.children(v);
  if (ca.size() != cb.size()) return false;
  std::vector<char> used(cb.size(), 0);
  std::function<bool(std::size_t)> match = [&](std::size_t i) {
    if (i == ca.size()) return true;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (used[j] || !rooted_iso(a, ca[i], b, cb[j])) continue;
      used[j] = 1;
      if (match(i + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  return match(0);
}

// All depth-b trees allowed by the degree window, built child multiset by
// child multiset from the layer below.
std::set<std::string> window_trees(int m, int d, int b) {
  std::function<std::vector<RootedTree>(int)> below = [&](int t) -> std::vector<RootedTree> {
    if (t == b) return {RootedTree{}};
    const auto kids = below(t + 1);
    const int lo = t == 0 ? m : m - 1, hi = t == 0 ? d : d - 1;
    std::vector<RootedTree> out;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (static_cast<int>(pick.size()) >= lo) {
        RootedTree tree;
        for (std::size_t idx : pick) {
          const RootedTree& sub = kids[idx];
          std::vector<int> map(sub.size());
          map[0] = tree.add_child(0);
          for (std::size_t x = 1; x < sub.size(); ++x) map[x] = tree.add_child(map[sub.parent(static_cast<int>(x))]);
        }
        out.push_back(tree);
      }
      if (static_cast<int>(pick.size()) == hi) return;
      for (std::size_t i = from; i < kids.size(); ++i) {
        pick.push_back(i);
        rec(i);
        pick.pop_back();
      }
    };
    rec(0);
    return out;
  };
  std::set<std::string> codes;
  for (const auto& t : below(0)) codes.insert(canonical_code(t));
  return codes;
}

// Some orientation of the edges gives every vertex above depth b exactly m
// older neighbors.
bool orientable(const RootedTree& t, int m, int b) {
  const std::size_t edges = t.size() - 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges); ++mask) {
    std::vector<int> older(t.size(), 0);
    for (std::size_t e = 0; e < edges; ++e) {
      const int child = static_cast<int>(e + 1);
      ++older[(mask >> e) & 1 ? child : t.parent(child)];
    }
    bool ok = true;
    for (std::size_t v = 0; v < t.size() && ok; ++v)
      if (t.depth_of(static_cast<int>(v)) < b && older[v] != m) ok = false;
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("canonical codes") {
  CHECK(canonical_code(RootedTree{}) == "()");
  const RootedTree s1 = RootedTree::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}, 0);
  const RootedTree s2 = RootedTree::from_edges(4, {{3, 0}, {3, 1}, {2, 3}}, 3);
  CHECK(canonical_code(s1) == canonical_code(s2));
  CHECK(canonical_code(s1) == "(()()())");
  CHECK_THROWS_AS(RootedTree::from_edges(3, {{0, 1}, {1, 2}, {2, 0}}, 0), ValidationError);
  CHECK(canonical_code(RootedTree::from_code("((())(()()))")) == "((()())(()))");
}

TEST_CASE("code equality matches rooted isomorphism") {
  Rng rng(17);
  std::vector<RootedTree> trees;
  for (int i = 0; i < 200; ++i) trees.push_back(random_tree(rng, 1 + rng.below(12)));
  int iso_pairs = 0;
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = i + 1; j < trees.size(); ++j) {
      if (trees[i].size() != trees[j].size()) continue;
      const bool iso = rooted_iso(trees[i], 0, trees[j], 0);
      iso_pairs += iso;
      CHECK(iso == (canonical_code(trees[i]) == canonical_code(trees[j])));
    }
  CHECK(iso_pairs > 0);
}

TEST_CASE("tree order") {
  const TreeType star2 = make_type("(()())", 1), star3 = make_type("(()()())", 1);
  CHECK(compare(star2, star3) == std::strong_ordering::less);
  CHECK(compare(star3, star3) == std::strong_ordering::equal);
  const TreeType one = make_type("((()()))", 2), two = make_type("((())())", 2);
  CHECK(compare(one, two) == std::strong_ordering::less);
  CHECK_THROWS_AS(compare(star2, one), ValidationError);
}

TEST_CASE("adding a branch moves a type up the order") {
  for (const auto& t : enumerate_max_admissible(1, 3, 2)) {
    const RootedTree tree = RootedTree::from_code(t.code);
    if (tree.children(0).size() >= 3) continue;
    RootedTree bigger = tree;
    bigger.add_child(bigger.add_child(0));
    CHECK(compare_codes(t.code, canonical_code(bigger)) < 0);
  }
}

TEST_CASE("enumeration against an independent generator") {
  CHECK(enumerate_max_admissible(1, 3, 1).size() == 3);
  CHECK(enumerate_max_admissible(2, 5, 1).size() == 4);
  for (auto [m, d, b] : {std::tuple{1, 3, 1}, {2, 5, 1}, {1, 3, 2}, {1, 4, 2}, {2, 5, 2}, {1, 3, 3}}) {
    CAPTURE(m);
    CAPTURE(d);
    CAPTURE(b);
    const std::set<std::string> window = window_trees(m, d, b);
    std::set<std::string> got_window;
    for (const auto& t : enumerate_degree_constrained(m, d, b, 100000)) got_window.insert(t.code);
    CHECK(got_window == window);
    std::set<std::string> feasible;
    for (const auto& code : window)
      if (orientable(RootedTree::from_code(code), m, b)) feasible.insert(code);
    const auto types = enumerate_max_admissible(m, d, b, 100000);
    std::set<std::string> got;
    for (const auto& t : types) got.insert(t.code);
    CHECK(got == feasible);
    CHECK(count_max_admissible(m, d, b) == types.size());
    for (std::size_t i = 1; i < types.size(); ++i) CHECK(compare(types[i - 1], types[i]) == std::strong_ordering::less);
  }
  CHECK_THROWS_AS(enumerate_max_admissible(2, 5, 3, 100), GuardExceeded);
}

TEST_CASE("orbit factors") {
  for (int k = 3; k <= 4; ++k) {
    RootedTree t;
    std::vector<int> level1, level2;
    for (int i = 0; i < k; ++i) level1.push_back(t.add_child(0));
    for (int u : level1)
      for (int i = 0; i < k - 1; ++i) level2.push_back(t.add_child(u));
    for (int u : level2)
      for (int i = 0; i < k - 1; ++i) t.add_child(u);
    CHECK(orbit_factor(t, 0) == 1);
    CHECK(orbit_factor(t, level1[0]) == static_cast<std::size_t>(k));
    CHECK(orbit_factor(t, level2[0]) == static_cast<std::size_t>(k * (k - 1)));
  }
}

TEST_CASE("tree census") {
  const UAGraph tree = generate(1, 3, 2000, 5);
  for (int b = 1; b <= 3; ++b) {
    const TreeCensus c = census_trees(tree.graph(), b);
    CHECK(c.excluded == 0);
    std::size_t total = 0;
    for (const auto& [code, cnt] : c.counts) total += cnt;
    CHECK(total == 2000);
  }
  const TreeCensus tri = census_trees(UAGraph::seed(3, 7).graph(), 1);
  CHECK(tri.excluded == 3);
  CHECK(tri.counts.empty());

  const UAGraph g = generate(2, 5, 2000, 6);
  const TreeCensus c = census_trees(g.graph(), 1);
  std::vector<std::size_t> by_degree(6, 0);
  for (Vertex v = 1; v <= g.n(); ++v) {
    const Ball bl = ball(g.graph(), v, 1);
    if (bl.induced_edges.size() + 1 == bl.vertices.size()) ++by_degree[g.graph().degree(v)];
  }
  std::size_t total = c.excluded;
  for (const auto& [code, cnt] : c.counts) {
    total += cnt;
    CHECK(cnt == by_degree[child_codes(code).size()]);
  }
  CHECK(total == g.n());

  // the census is a function of the graph alone
  std::stringstream ss;
  write_snapshot(g, ss);
  const TreeCensus again = census_trees(read_snapshot(ss).graph(), 2);
  const TreeCensus direct = census_trees(g.graph(), 2, 1);
  CHECK(again.counts == direct.counts);
  CHECK(census_trees(g.graph(), 2, 3).counts == direct.counts);
}

TEST_CASE("tree fixed point") {
  const TreeFixedPoint fp1 = solve_tree_fixed_point(1, 3, 1);
  const FixedPoint rho = solve_rho(1, 3);
  REQUIRE(fp1.layer(1).types.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(fp1.layer(1).rho[i] - rho.rho[i]) < 1e-9);

  for (auto [m, d, b] : {std::tuple{1, 3, 3}, {2, 5, 2}, {1, 4, 2}}) {
    const TreeFixedPoint fp = solve_tree_fixed_point(m, d, b);
    for (int depth = 1; depth <= b; ++depth) {
      const TreeLayer& l = fp.layer(depth);
      double sum = 0;
      for (double r : l.rho) {
        CHECK(r > 0);
        sum += r;
      }
      CHECK(sum <= 1 + 1e-9);
      CHECK(l.residual < 1e-12);
      for (const auto& e : l.moves) CHECK(e.row > e.col);
      // only the saturated type is absorbing
      std::string full = "()";
      for (int k = 1; k <= depth; ++k) {
        std::string next = "(";
        for (int c = 0; c < (k == depth ? d : d - 1); ++c) next += full;
        full = next + ")";
      }
      for (std::size_t i = 0; i < l.types.size(); ++i) CHECK((l.out_rate[i] > 0) == (l.types[i].code != full));
    }
  }
}

TEST_CASE("tree densities against a simulated graph") {
  const TreeFixedPoint fp = solve_tree_fixed_point(1, 3, 2);
  std::map<std::string, double> mean;
  const int seeds = 3;
  for (int s = 1; s <= seeds; ++s) {
    const UAGraph g = generate(1, 3, 200000, static_cast<std::uint64_t>(s));
    for (const auto& [code, cnt] : census_trees(g.graph(), 2).counts) mean[code] += cnt / 200000.0 / seeds;
  }
  for (const auto& t : fp.layer(2).types) CHECK(std::abs(mean[t.code] - fp.density(2, t.code)) < 0.01);
}
