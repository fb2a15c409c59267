#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "uagraph/degree_dynamics.hpp"
#include "uagraph/graph.hpp"

namespace uagraph {

/// Rooted tree with node 0 as the root.
class RootedTree {
 public:
  RootedTree() : children_(1) {}

  int add_child(int parent);
  std::size_t size() const { return children_.size(); }
  const std::vector<int>& children(int node) const { return children_[node]; }
  int parent(int node) const { return parent_[node]; }
  int depth_of(int node) const;
  /// Height: largest root-to-node distance.
  int height() const;

  /// Parses a canonical code (balanced parentheses).
  static RootedTree from_code(std::string_view code);
  /// Builds a rooted tree from an undirected edge list; throws ValidationError
  /// if the edges do not form a tree on nodes 0..n-1.
  static RootedTree from_edges(std::size_t n, const std::vector<std::pair<int, int>>& edges, int root);

 private:
  std::vector<std::vector<int>> children_;
  std::vector<int> parent_{-1};
};

// Canonical encoding: a node is "(" followed by the codes of its children in
// decreasing order under the tree order, then ")". A single vertex is "()".
std::string canonical_code(const RootedTree& tree, int node = 0);

/// Top-level child codes of a code, in the order they appear.
std::vector<std::string_view> child_codes(std::string_view code);

/// Tree order on codes: more root children is larger; equal child counts
/// compare the decreasing child tuples lexicographically. Returns <0, 0, >0.
int compare_codes(std::string_view a, std::string_view b);

struct TreeType {
  int depth = 0;  // ball radius the type describes
  std::string code;
  std::size_t size = 0;
  int root_degree = 0;
};

TreeType make_type(std::string code, int depth);

/// Throws ValidationError when depths differ.
std::strong_ordering compare(const TreeType& a, const TreeType& b);

/// Wrapper realizing the tree order for sorted containers.
struct TreeOrderKey {
  std::string code;
  friend bool operator<(const TreeOrderKey& a, const TreeOrderKey& b) { return compare_codes(a.code, b.code) < 0; }
  friend bool operator==(const TreeOrderKey& a, const TreeOrderKey& b) { return a.code == b.code; }
};

struct CodeLess {
  bool operator()(const std::string& a, const std::string& b) const { return compare_codes(a, b) < 0; }
};

/// Number of automorphism-orbit mates of `node` (vertices whose root path has
/// the same sequence of subtree types).
std::size_t orbit_factor(const RootedTree& tree, int node);

/// Depth-b types allowed by the degree window alone: root with [m, d]
/// children, interior non-root vertices with [m-1, d-1] children, vertices at
/// depth b unconstrained. Sorted by the tree order.
std::vector<TreeType> enumerate_degree_constrained(int m, int d, int b, std::size_t guard = 5000);

/// Degree-constrained types that also admit an arrival orientation: every
/// vertex above depth b has exactly m neighbors older than itself (vertices at
/// depth b may have their older neighbors outside the ball). These are the
/// types that occur with positive density. Sorted by the tree order.
std::vector<TreeType> enumerate_max_admissible(int m, int d, int b, std::size_t guard = 5000);

/// Counts before generation; used by the guard.
std::size_t count_max_admissible(int m, int d, int b);

struct TreeCensus {
  int depth = 0;
  std::size_t n = 0;
  std::map<std::string, std::size_t, CodeLess> counts;
  std::size_t excluded = 0;  // vertices whose ball is not a tree
};

/// Classifies every vertex by its radius-b ball when that ball is a tree.
TreeCensus census_trees(const Graph& g, int b, int jobs = 1);

/// Rooted code of an acyclic ball around `root` (BFS tree). Throws if cyclic.
std::string ball_code(const Graph& g, Vertex root, int radius);

struct SparseEntry {
  int row = 0;  // successor type
  int col = 0;  // source type
  double rate = 0.0;
};

struct TreeLayer {
  int depth = 0;
  std::vector<TreeType> types;  // ascending tree order
  std::unordered_map<std::string, int> index;
  std::vector<double> creation;     // Y
  std::vector<SparseEntry> moves;   // off-diagonal part of A
  std::vector<double> out_rate;     // -diag(A)
  std::vector<double> rho;
  double residual = 0.0;            // max |(A - I) z + Y|
  double creation_total = 0.0;      // sum of Y
};

struct TreeFixedPoint {
  int m = 0;
  int d = 0;
  FixedPoint degrees;
  std::vector<TreeLayer> layers;  // layers[i-1] has depth i

  const TreeLayer& layer(int depth) const { return layers.at(static_cast<std::size_t>(depth - 1)); }
  /// Density of a code at the given depth (0 for unknown codes).
  double density(int depth, const std::string& code) const;
};

TreeFixedPoint solve_tree_fixed_point(int m, int d, int b, double tol = 1e-12, std::size_t guard = 5000);

/// Probability that a uniform open vertex has each open depth-h type under the
/// fixed point: rho_T / (1 - rho_d) for types whose root has fewer than d
/// children; depth 0 is the single vertex with probability 1.
std::vector<std::pair<std::string, double>> open_type_law(const TreeFixedPoint& fp, int depth);

/// All multisets of size k drawn from `weights`, with multinomial
/// probabilities k!/prod(mult!) * prod w. Calls fn(indices, probability) with
/// indices non-decreasing.
template <class Fn>
void for_each_multiset(const std::vector<double>& weights, int k, Fn&& fn);

}  // namespace uagraph

#include "uagraph/detail/multiset.hpp"
