#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uagraph/graph.hpp"

namespace uagraph {

/// Simple cycle in canonical orientation: starts at its smallest vertex and
/// continues toward the smaller of that vertex's two cycle neighbors.
struct CycleRecord {
  std::vector<Vertex> vertices;
  int length = 0;
  Vertex min_vertex = 0;

  friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
  friend auto operator<=>(const CycleRecord& a, const CycleRecord& b) { return a.vertices <=> b.vertices; }
};

CycleRecord canonical_cycle(std::vector<Vertex> cycle);

/// Every simple cycle with 3 <= length <= max_len, each once, sorted.
std::vector<CycleRecord> find_cycles(const Graph& g, int max_len);
/// Cycles of length <= max_len through v, using only vertices > floor.
std::vector<CycleRecord> find_cycles_through(const Graph& g, Vertex v, int max_len, Vertex floor = 0);

/// Keeps the list of short cycles up to date while a UAGraph grows: every new
/// cycle passes through the newest vertex.
class CycleTracker {
 public:
  explicit CycleTracker(int max_len) : max_len_(max_len) {}
  /// Scan arrivals not yet seen.
  void update(const UAGraph& g);
  const std::vector<CycleRecord>& cycles() const { return cycles_; }
  std::size_t count(int length) const;

 private:
  int max_len_;
  std::size_t seen_ = 0;
  std::vector<CycleRecord> cycles_;
};

/// Depth-k unicyclic type of a cycle: the cycle plus the trees of depth k
/// hanging from it. With k = 0 there are no trees, every l-cycle has the same
/// shape, and the code only records completeness ("C<l>+:" when every cycle
/// vertex has degree d).
struct UnicyclicType {
  int cycle_length = 0;
  int depth = 0;
  std::string code;  // "C<l>:" followed by the dihedrally minimal hanging-code sequence
  std::vector<std::string> hanging;  // in the orientation of `code`
  bool complete = false;             // every vertex at distance < k has degree d (k = 0: the cycle)
};

/// Order on unicyclic types of one (l, k): hanging codes sorted decreasingly
/// and compared lexicographically with the tree order, then the full code.
int compare_unicyclic(const UnicyclicType& a, const UnicyclicType& b);
int compare_unicyclic_codes(const std::string& a, const std::string& b);
UnicyclicType unicyclic_from_code(const std::string& code, int depth, int d);

struct UnicyclicCodeLess {
  bool operator()(const std::string& a, const std::string& b) const { return compare_unicyclic_codes(a, b) < 0; }
};

/// Classifies the ball around a cycle. Returns nullopt when the ball holds
/// more than one cycle.
std::optional<UnicyclicType> classify_cycle(const Graph& g, const CycleRecord& c, int k, int d);

struct UnicyclicCensus {
  int ell = 0;
  int k = 0;
  std::map<std::string, std::size_t, UnicyclicCodeLess> counts;  // every classified type
  std::map<std::string, bool> complete;                          // code -> complete flag
  std::size_t complete_count = 0;                                // N_{U_0}
  std::size_t multicyclic_balls = 0;
  std::size_t cycles = 0;
};

UnicyclicCensus census_unicyclic(const Graph& g, int d, int ell, int k);
/// Same census over an already known cycle list (only length-ell entries used).
UnicyclicCensus census_unicyclic(const Graph& g, int d, int ell, int k, const std::vector<CycleRecord>& cycles);

struct MulticyclicWitness {
  std::vector<Vertex> vertices;  // a connected subgraph with two independent cycles
  CycleRecord first, second;
};

/// True iff no connected subgraph on at most size_cap vertices, all above
/// prefix_s, contains two independent cycles of length <= ell_max.
std::pair<bool, std::optional<MulticyclicWitness>> check_no_multicyclic(const Graph& g, int ell_max, int size_cap,
                                                                        Vertex prefix_s);

/// Pairwise set distances (-1 when unreachable).
std::vector<std::vector<int>> distance_profile(const Graph& g, const std::vector<std::vector<Vertex>>& sets);

}  // namespace uagraph
