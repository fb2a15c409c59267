#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "uagraph/cycles.hpp"
#include "uagraph/ef_game.hpp"
#include "uagraph/graph.hpp"

using namespace uagraph;

namespace {

// Every cycle of length <= max_len, by checking all vertex subsets and all
// cyclic orders on each.
std::set<std::vector<Vertex>> brute_cycles(const Graph& g, int max_len) {
  std::set<std::vector<Vertex>> out;
  std::vector<Vertex> subset;
  std::function<void(Vertex)> rec = [&](Vertex from) {
    if (subset.size() >= 3) {
      std::vector<Vertex> rest(subset.begin() + 1, subset.end());
      do {
        if (rest.front() > rest.back()) continue;
        std::vector<Vertex> cyc{subset.front()};
        cyc.insert(cyc.end(), rest.begin(), rest.end());
        bool ok = true;
        for (std::size_t i = 0; i < cyc.size() && ok; ++i) ok = g.has_edge(cyc[i], cyc[(i + 1) % cyc.size()]);
        if (ok) out.insert(cyc);
      } while (std::next_permutation(rest.begin(), rest.end()));
    }
    if (static_cast<int>(subset.size()) == max_len) return;
    for (Vertex v = from; v <= g.size(); ++v) {
      subset.push_back(v);
      rec(v + 1);
      subset.pop_back();
    }
  };
  rec(1);
  return out;
}

std::vector<Vertex> ball_vertices(const Graph& g, const std::vector<Vertex>& centers, int r) {
  return ball(g, std::span<const Vertex>(centers), r).vertices;
}

}  // namespace

TEST_CASE("cycles of small graphs") {
  const auto tri = find_cycles(cycle_graph(3), 5);
  REQUIRE(tri.size() == 1);
  CHECK(tri[0].length == 3);
  CHECK(find_cycles(generate(1, 3, 5000, 2).graph(), 10).empty());
  CHECK(find_cycles(cycle_graph(7), 6).empty());
  CHECK(find_cycles(cycle_graph(7), 7).size() == 1);
  CHECK(canonical_cycle({5, 2, 9, 4}).vertices == std::vector<Vertex>{2, 5, 4, 9});
}

TEST_CASE("cycle enumeration against subsets") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const UAGraph g = generate(2, 5, 30, seed);
    std::set<std::vector<Vertex>> got;
    for (const auto& c : find_cycles(g.graph(), 6)) {
      CHECK(c.length == static_cast<int>(c.vertices.size()));
      CHECK(c.min_vertex == *std::min_element(c.vertices.begin(), c.vertices.end()));
      CHECK(got.insert(c.vertices).second);
    }
    CHECK(got == brute_cycles(g.graph(), 6));
  }
}

TEST_CASE("tracker agrees with a full scan and cycles persist") {
  UAGraph g = UAGraph::seed(2, 5, 4);
  Rng rng(4);
  CycleTracker tracker(6);
  std::vector<CycleRecord> before;
  for (std::size_t n : {500, 2000, 8000}) {
    g.grow(n - g.n(), rng);
    tracker.update(g);
    auto all = find_cycles(g.graph(), 6);
    auto tracked = tracker.cycles();
    std::sort(tracked.begin(), tracked.end());
    CHECK(tracked == all);
    for (const auto& c : before) CHECK(std::binary_search(all.begin(), all.end(), c));
    before = all;
  }
}

TEST_CASE("through-vertex scan") {
  const UAGraph g = generate(2, 5, 3000, 8);
  const auto all = find_cycles(g.graph(), 5);
  for (Vertex v : {Vertex{1}, Vertex{2}, Vertex{40}}) {
    std::set<CycleRecord> want;
    for (const auto& c : all)
      if (std::find(c.vertices.begin(), c.vertices.end(), v) != c.vertices.end()) want.insert(c);
    const auto got = find_cycles_through(g.graph(), v, 5);
    CHECK(std::set<CycleRecord>(got.begin(), got.end()) == want);
  }
}

TEST_CASE("handcrafted unicyclic types") {
  const Graph pendant = graph_from_edges(5, {{1, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}});
  const UnicyclicCensus a = census_unicyclic(pendant, 5, 3, 2);
  REQUIRE(a.counts.size() == 1);
  CHECK(a.counts.begin()->first == "C3:((()))|()|()");
  CHECK_FALSE(a.complete.at("C3:((()))|()|()"));
  CHECK(a.complete_count == 0);

  const Graph full = graph_from_edges(6, {{1, 2}, {2, 3}, {1, 3}, {1, 4}, {2, 5}, {3, 6}});
  const UnicyclicCensus b = census_unicyclic(full, 3, 3, 1);
  REQUIRE(b.counts.size() == 1);
  CHECK(b.complete.begin()->second);
  CHECK(b.complete_count == 1);
  CHECK(census_unicyclic(full, 4, 3, 1).complete_count == 0);

  const Graph two = graph_from_edges(4, {{1, 2}, {2, 3}, {1, 3}, {2, 4}, {3, 4}});
  const UnicyclicCensus c = census_unicyclic(two, 5, 3, 1);
  CHECK(c.multicyclic_balls == 2);
  CHECK(c.counts.empty());
}

TEST_CASE("dihedral codes are orientation free") {
  const Graph g1 = graph_from_edges(7, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {1, 5}, {2, 6}, {6, 7}});
  const Graph g2 = graph_from_edges(7, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {3, 5}, {4, 6}, {6, 7}});
  const auto t1 = classify_cycle(g1, find_cycles(g1, 4)[0], 2, 5);
  const auto t2 = classify_cycle(g2, find_cycles(g2, 4)[0], 2, 5);
  REQUIRE(t1);
  REQUIRE(t2);
  CHECK(t1->code == t2->code);
  CHECK(unicyclic_from_code(t1->code, 2, 5).code == t1->code);
}

TEST_CASE("unicyclic census against ball isomorphism") {
  const UAGraph g = generate(2, 5, 10000, 3);
  for (int k : {1, 2}) {
    std::vector<std::pair<std::string, std::vector<Vertex>>> balls;
    std::vector<CycleRecord> cycles;
    for (const auto& c : find_cycles(g.graph(), 3)) {
      const auto t = classify_cycle(g.graph(), c, k, 5);
      if (!t) continue;
      balls.emplace_back(t->code, ball_vertices(g.graph(), c.vertices, k));
      cycles.push_back(c);
    }
    REQUIRE(balls.size() >= 5);
    for (std::size_t i = 0; i < balls.size(); ++i)
      for (std::size_t j = i + 1; j < balls.size(); ++j) {
        std::map<Vertex, int> ca, cb;
        for (Vertex v : cycles[i].vertices) ca[v] = 1;
        for (Vertex v : cycles[j].vertices) cb[v] = 1;
        const bool iso = find_isomorphism(g.graph(), balls[i].second, g.graph(), balls[j].second, {}, ca, cb).has_value();
        CHECK(iso == (balls[i].first == balls[j].first));
      }
    const UnicyclicCensus census = census_unicyclic(g.graph(), 5, 3, k);
    std::size_t total = census.multicyclic_balls;
    for (const auto& [code, cnt] : census.counts) total += cnt;
    CHECK(total == census.cycles);
    CHECK(census.cycles == find_cycles(g.graph(), 3).size());
  }
}

TEST_CASE("complete types stay frozen") {
  UAGraph g = UAGraph::seed(2, 5, 12);
  Rng rng(12);
  g.grow(20000, rng);
  std::map<CycleRecord, std::string> frozen;
  for (const auto& c : find_cycles(g.graph(), 3)) {
    const auto t = classify_cycle(g.graph(), c, 1, 5);
    if (t && t->complete) frozen[c] = t->code;
  }
  REQUIRE_FALSE(frozen.empty());
  g.grow(40000, rng);
  for (const auto& [c, code] : frozen) {
    const auto t = classify_cycle(g.graph(), c, 1, 5);
    REQUIRE(t);
    CHECK(t->code == code);
  }
}

TEST_CASE("multicyclic detection") {
  const Graph diamond = graph_from_edges(4, {{1, 2}, {2, 3}, {1, 3}, {2, 4}, {3, 4}});
  const auto [ok, witness] = check_no_multicyclic(diamond, 4, 6, 0);
  CHECK_FALSE(ok);
  REQUIRE(witness);
  CHECK(witness->vertices.size() == 4);
  CHECK(check_no_multicyclic(generate(1, 3, 3000, 1).graph(), 6, 10, 0).first);

  // two triangles joined by a path: found only when the cap covers the path
  const Graph dumbbell = graph_from_edges(8, {{1, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {6, 8}});
  CHECK(check_no_multicyclic(dumbbell, 3, 7, 0).first);
  CHECK_FALSE(check_no_multicyclic(dumbbell, 3, 8, 0).first);
  CHECK(check_no_multicyclic(dumbbell, 3, 8, 1).first);

  int clean = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Graph g = generate(2, 5, 10000, seed).graph();
    clean += check_no_multicyclic(g, 4, 4, 100).first;
    // larger caps do find witnesses; each must be connected with edges > vertices
    const auto [ok8, w] = check_no_multicyclic(g, 4, 8, 100);
    if (ok8) continue;
    REQUIRE(w);
    const std::set<Vertex> vs(w->vertices.begin(), w->vertices.end());
    CHECK(vs.size() <= 8);
    CHECK(*vs.begin() > 100);
    std::size_t edges = 0;
    for (Vertex v : vs)
      for (Vertex u : g.neighbors(v)) edges += u < v && vs.count(u);
    CHECK(edges >= vs.size() + 1);
    std::set<Vertex> seen{*vs.begin()};
    std::vector<Vertex> stack{*vs.begin()};
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex u : g.neighbors(v))
        if (vs.count(u) && seen.insert(u).second) stack.push_back(u);
    }
    CHECK(seen.size() == vs.size());
  }
  CHECK(clean >= 45);
}

TEST_CASE("distance profile") {
  const Graph p = path_graph(5);
  auto prof = distance_profile(p, {{1}, {1}, {5}});
  CHECK(prof[0][1] == 0);
  CHECK(prof[0][2] == 4);
  CHECK(prof[2][0] == 4);

  const UAGraph g = generate(2, 5, 800, 9);
  const std::vector<std::vector<Vertex>> sets{{1, 7}, {300}, {500, 650, 799}, {42}};
  prof = distance_profile(g.graph(), sets);
  LocalBfs bfs(g.graph());
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j) {
      int best = -1;
      for (Vertex s : sets[i]) {
        bfs.run(s, LocalBfs::kUnbounded);
        for (Vertex t : sets[j])
          if (best < 0 || bfs.distance(t) < best) best = bfs.distance(t);
      }
      CHECK(prof[i][j] == best);
    }
}
