#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uagraph/cycles.hpp"
#include "uagraph/graph.hpp"

namespace uagraph {

enum class Winner { Duplicator, Spoiler };
std::string to_string(Winner w);

struct EfOptions {
  std::size_t size_cap = 16;
  int max_rounds = 4;
};

/// Exact value of the R-round Ehrenfeucht-Fraisse game. Throws GuardExceeded
/// when a graph exceeds the size cap or R exceeds max_rounds.
Winner ef_solve(const Graph& g, const Graph& h, int rounds, const EfOptions& opt = {});

struct Partition {
  std::vector<int> class_of;                 // per graph
  std::vector<std::vector<std::size_t>> classes;
};

/// Groups graphs by "Duplicator wins"; throws PropertyViolation if the
/// relation is not an equivalence on the sample.
Partition partition_classes(const std::vector<Graph>& graphs, int rounds, int jobs = 1, const EfOptions& opt = {});

struct GameConfig {
  int R = 1;
  std::int64_t a = 3;  // 3^R
  Vertex n0 = 0;
  Vertex N0 = 0;
  int m = 1;
  int d = 3;
  std::size_t type_guard = 5000;  // clause 4 enumeration guard per depth

  /// Validates R >= 1, N0 > n0, d > 2m and sets a = 3^R.
  static GameConfig make(int R, Vertex n0, Vertex N0, int m, int d);
  std::int64_t radius(int round) const;  // 2^(R - round + 1)
};

struct PropertyReport {
  bool holds = true;
  int clause = 0;  // first violated clause (0 when none)
  std::string message;
  std::vector<Vertex> witness;
};

/// Clause-by-clause check of Q1 on a graph whose vertex ids are arrival times.
PropertyReport check_Q1(const Graph& g, const GameConfig& cfg);
/// Q2 for a pair. Throws ValidationError when the restrictions to [N0]
/// differ or the sizes are not n1 > n2 > N0.
PropertyReport check_Q2(const Graph& g1, const Graph& g2, const GameConfig& cfg);

/// Kernels (cycles of length <= 2^R entirely above n0) of non-complete
/// 2^R-graphs. A cycle whose 2^R-ball holds more cycles counts as non-complete.
std::vector<CycleRecord> noncomplete_kernels(const Graph& g, const GameConfig& cfg);

struct StructureSummary {
  std::vector<CycleRecord> kernels;
  std::map<std::string, std::size_t> noncomplete_types;  // a-graph codes of non-complete copies
  std::size_t complete_a_graphs = 0;
  std::vector<Vertex> core_deficient;  // vertices of [N0] with degree below d
};
StructureSummary summarize_structure(const Graph& g, const GameConfig& cfg);

/// Maximal copies of the listed a-graph / tree at pairwise distance >= a and
/// distance >= a from [N0]: returns up to `want` such copies (vertex sets).
std::vector<std::vector<Vertex>> far_apart_copies(const Graph& g, const std::vector<std::vector<Vertex>>& copies,
                                                  const GameConfig& cfg, std::size_t want);

// ---------------------------------------------------------------------------
// Duplicator strategy

struct PebbleRound {
  int side = 0;  // graph Spoiler played in (0 or 1)
  Vertex v[2] = {0, 0};
  int strategy_case = 0;
  std::vector<Vertex> region[2];           // B_r(X u {x}) in each graph
  std::map<Vertex, Vertex> phi;            // region[0] -> region[1]
  std::vector<Vertex> kernel[2];
};

struct MatchState {
  int round = 0;
  std::vector<PebbleRound> rounds;
};

struct MoveRecord {
  int round = 0;
  int side = 0;
  Vertex vertex = 0;
  Vertex reply = 0;
  int strategy_case = 0;
  bool invariant_ok = false;
  std::string note;
  nlohmann::json to_json() const;
};

class DuplicatorStrategy {
 public:
  /// g[0], g[1] share [N0]; `verify` runs Q1 on both and Q2 on the pair once.
  DuplicatorStrategy(const Graph& g1, const Graph& g2, GameConfig cfg, bool verify = true);
  DuplicatorStrategy(const Graph&&, const Graph&, GameConfig, bool = true) = delete;
  DuplicatorStrategy(const Graph&, const Graph&&, GameConfig, bool = true) = delete;

  const PropertyReport& q1(int side) const { return q1_[side]; }
  const PropertyReport& q2() const { return q2_; }
  const Graph& graph(int side) const { return *g_[side]; }
  bool preconditions_hold() const { return q1_[0].holds && q1_[1].holds && q2_.holds; }

  /// Answers Spoiler's vertex `x` in graph `side`. Updates `state`. Throws
  /// PropertyViolation when no reply satisfies the strategy.
  MoveRecord respond(MatchState& state, int side, Vertex x) const;

  /// Pebble map is a partial isomorphism and each round's certificate holds.
  bool invariant(const MatchState& state, std::string* why = nullptr) const;

 private:
  const Graph* g_[2];
  GameConfig cfg_;
  PropertyReport q1_[2], q2_;
  std::vector<CycleRecord> kernels_[2];

  std::vector<Vertex> kernels_near(int side, Vertex x, std::int64_t r) const;
  std::vector<Vertex> region(int side, const std::vector<Vertex>& kernel, Vertex x, std::int64_t r) const;
  int core_distance(int side, Vertex x, std::int64_t limit) const;
};

struct AdversaryResult {
  std::size_t plays = 0;
  std::size_t losses = 0;           // plays where the pebble map stopped being a partial isomorphism
  std::size_t strategy_failures = 0;  // no reply found or certificate broken
  std::vector<MoveRecord> first_bad_play;
  bool duplicator_never_lost() const { return losses == 0 && strategy_failures == 0; }
};

/// Plays every Spoiler sequence of R moves (either graph, any vertex) against
/// the strategy.
AdversaryResult exhaustive_adversary(const DuplicatorStrategy& s, int rounds, std::size_t transcript_limit = 0,
                                     std::vector<MoveRecord>* transcript = nullptr);

/// Pebble map x_j -> y_j is an isomorphism of the induced subgraphs.
bool is_partial_isomorphism(const Graph& g, const Graph& h, const std::vector<std::pair<Vertex, Vertex>>& pairs);

/// Induced-subgraph isomorphism between vertex sets a and b extending `fixed`,
/// with `color_a`/`color_b` labels that must match. Backtracking search.
std::optional<std::map<Vertex, Vertex>> find_isomorphism(const Graph& g, const std::vector<Vertex>& a, const Graph& h,
                                                         const std::vector<Vertex>& b,
                                                         const std::map<Vertex, Vertex>& fixed,
                                                         const std::map<Vertex, int>& color_a = {},
                                                         const std::map<Vertex, int>& color_b = {});

// ---------------------------------------------------------------------------
// Small graph helpers for tests and the acceptance harness

Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph graph_from_edges(std::size_t n, const std::vector<Edge>& edges, std::size_t degree_cap = 16);
/// Disjoint union; vertices of b are shifted by |a|.
Graph disjoint_union(const Graph& a, const Graph& b);

}  // namespace uagraph
