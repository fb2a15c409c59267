#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uagraph/rng.hpp"

namespace uagraph {

/// Vertex ids are 1-based arrival indices: vertex s appears at time s.
using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph with a hard degree cap and neighbor lists kept in
/// insertion order. Storage is one flat slab of `degree_cap` slots per vertex.
class Graph {
 public:
  explicit Graph(std::size_t degree_cap = 64);

  Vertex add_vertex();
  /// Throws ValidationError on loops, parallel edges, unknown ids or a full slot.
  void add_edge(Vertex u, Vertex v);

  std::size_t size() const { return degree_.size(); }
  std::size_t edge_count() const { return edges_; }
  std::size_t degree_cap() const { return cap_; }
  bool contains(Vertex v) const { return v >= 1 && v <= size(); }
  std::size_t degree(Vertex v) const { return degree_[v - 1]; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + (v - 1) * cap_, degree_[v - 1]};
  }
  bool has_edge(Vertex u, Vertex v) const;
  /// Edges (u, v) with u < v, ordered by v then by position in v's list.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::size_t cap_;
  std::vector<Vertex> adjacency_;
  std::vector<std::uint32_t> degree_;
  std::size_t edges_ = 0;
};

/// Graph for the bounded-degree uniform attachment process G_n(m, d).
class UAGraph {
 public:
  /// Complete seed graph K_m. Requires m >= 1 and d > 2m.
  static UAGraph seed(int m, int d, std::uint64_t seed_value = 0);

  /// One arrival: vertex n+1 attaches to a uniform m-subset of open vertices.
  /// Returns the chosen targets in ascending order.
  std::span<const Vertex> step(Rng& rng);
  void grow(std::size_t steps, Rng& rng);

  int m() const { return m_; }
  int d() const { return d_; }
  std::size_t n() const { return graph_.size(); }
  std::uint64_t seed_value() const { return seed_value_; }
  const Graph& graph() const { return graph_; }

  std::size_t open_count() const { return open_.size(); }
  bool is_open(Vertex v) const { return open_pos_[v - 1] != 0; }
  std::span<const Vertex> open_vertices() const { return open_; }
  /// Number of vertices at the degree cap, N_d(n).
  std::size_t saturated_count() const { return n() - open_.size(); }

  /// Targets of an arrival v > m (its neighbors with smaller ids, ascending).
  std::vector<Vertex> targets(Vertex v) const;

  /// Rebuild from a recorded arrival sequence; used by snapshot loading.
  static UAGraph from_arrivals(int m, int d, std::uint64_t seed_value,
                               const std::vector<std::vector<Vertex>>& arrivals);

  friend bool operator==(const UAGraph& a, const UAGraph& b) {
    return a.m_ == b.m_ && a.d_ == b.d_ && a.graph_ == b.graph_;
  }

 private:
  UAGraph(int m, int d, std::uint64_t seed_value);
  void attach(const std::vector<Vertex>& targets);
  void open_insert(Vertex v);
  void open_remove(Vertex v);

  int m_;
  int d_;
  std::uint64_t seed_value_;
  Graph graph_;
  std::vector<Vertex> open_;
  std::vector<std::uint32_t> open_pos_;  // index + 1 into open_, 0 when closed
  std::vector<Vertex> last_targets_;
};

/// Seed K_m and grow to n vertices with Rng(seed).
UAGraph generate(int m, int d, std::size_t n, std::uint64_t seed);

/// Closed ball of radius `radius` around a vertex or a vertex set.
struct Ball {
  std::vector<Vertex> centers;
  int radius = 0;
  std::vector<Vertex> vertices;  // ascending
  std::vector<Edge> induced_edges;
};

Ball ball(const Graph& g, Vertex center, int radius);
Ball ball(const Graph& g, std::span<const Vertex> centers, int radius);

/// Reusable bounded multi-source BFS over a fixed graph. Scratch arrays are
/// sized once; each run only touches the vertices it reaches.
class LocalBfs {
 public:
  static constexpr int kUnbounded = std::numeric_limits<int>::max();

  explicit LocalBfs(const Graph& g);

  /// Visits every vertex within `radius` of `sources` in BFS order.
  std::span<const Vertex> run(std::span<const Vertex> sources, int radius,
                              Vertex forbidden_below = 0);
  std::span<const Vertex> run(Vertex source, int radius) { return run(std::span(&source, 1), radius); }

  bool reached(Vertex v) const { return stamp_[v] == epoch_; }
  /// Distance from the last run's sources, or -1 if not reached.
  int distance(Vertex v) const { return reached(v) ? dist_[v] : -1; }
  std::span<const Vertex> order() const { return order_; }
  /// Number of graph edges with both ends in the last visited set.
  std::size_t induced_edge_count() const;

  const Graph& graph() const { return *g_; }

 private:
  const Graph* g_;
  std::vector<std::uint32_t> stamp_;
  std::vector<int> dist_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> order_;
};

// Edge-list snapshot: header `ua m=<m> d=<d> n=<n> seed=<seed>` followed by
// one line `v: t_1 ... t_m` per arrival v > m in ascending order.
void write_snapshot(const UAGraph& g, std::ostream& out);
void write_snapshot(const UAGraph& g, const std::string& path);
UAGraph read_snapshot(std::istream& in);
UAGraph read_snapshot(const std::string& path);

// Plain undirected edge list: header `generic n=<n>`, then `u v` per line.
void write_generic(const Graph& g, std::ostream& out);
Graph read_generic(std::istream& in);
/// Loads either format; UA snapshots are returned as their underlying graph.
Graph read_any_graph(const std::string& path);

}  // namespace uagraph
