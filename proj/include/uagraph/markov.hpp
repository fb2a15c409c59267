#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uagraph/cycles.hpp"
#include "uagraph/rng.hpp"

namespace uagraph {

using CountVector = std::vector<std::int64_t>;

/// Rates of the counting chain on Z_+^K. Types are 0-based here; c_pair[j][i]
/// is the conversion rate j -> i and is only meaningful for j < i.
struct ChainSpec {
  int K = 0;
  std::vector<double> c;
  std::vector<std::vector<double>> c_pair;
  double c_out = 0.0;
  std::vector<std::string> labels;  // optional type codes, one per coordinate

  /// Checks signs, shape, c_1 > 0, c_out > 0 and reachability (every type from
  /// type 1, type K from every type). Throws ValidationError.
  void validate() const;
  /// Total jump rate D(S).
  double total_rate(const CountVector& s) const;

  static ChainSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

ChainSpec load_chain_spec(const std::string& path);

/// Single-type chain (birth c1, death c_out per unit).
ChainSpec birth_death_spec(double c1, double c_out);

struct ChainState {
  CountVector S;
  std::uint64_t n = 0;
};

/// One jump: create `to` (from = -1), convert from -> to, or remove from the
/// last type (to = -1). `weight` is the rate multiplied by the source count.
struct ChainMove {
  int from = -1;
  int to = -1;
  double weight = 0.0;
};

std::vector<ChainMove> chain_moves(const ChainSpec& spec, const CountVector& s);
CountVector apply_move(CountVector s, const ChainMove& mv);

/// Probabilities of each move and of holding at time n. Throws ModelViolation
/// when D(S)/n exceeds 1.
struct StepLaw {
  std::vector<ChainMove> moves;
  std::vector<double> prob;
  double hold = 1.0;
};
StepLaw inhomogeneous_law(const ChainSpec& spec, const ChainState& st);
/// Jump probabilities of the embedded chain (sum to 1, no hold).
StepLaw embedded_law(const ChainSpec& spec, const CountVector& s);

ChainState step_inhomogeneous(const ChainState& st, const ChainSpec& spec, Rng& rng);
ChainState step_embedded(const ChainState& st, const ChainSpec& spec, Rng& rng);

/// Runs the inhomogeneous chain from S = 0 at n_start to n_end, skipping the
/// idle steps in between jumps exactly.
CountVector run_inhomogeneous(const ChainSpec& spec, std::uint64_t n_start, std::uint64_t n_end, Rng& rng);

/// Distribution over count vectors, each coordinate capped at cap[i]
/// (larger values are lumped into the cap).
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<std::int64_t> cap) : cap_(std::move(cap)) {}

  void add(const CountVector& s, double weight = 1.0);
  /// Probabilities; sums to 1.
  std::map<CountVector, double> probabilities() const;
  double probability(const CountVector& s) const;
  double total_weight() const { return total_; }
  std::size_t samples() const { return samples_; }
  const std::vector<std::int64_t>& cap() const { return cap_; }
  CountVector truncate(const CountVector& s) const;

  static EmpiricalDistribution from_probabilities(const std::map<CountVector, double>& p,
                                                  std::vector<std::int64_t> cap = {});

 private:
  std::vector<std::int64_t> cap_;
  std::map<CountVector, double> weight_;
  double total_ = 0.0;
  std::size_t samples_ = 0;
};

/// Half the L1 distance; missing states count as probability 0.
double total_variation(const std::map<CountVector, double>& a, const std::map<CountVector, double>& b);
double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

struct LimitSimulation {
  std::uint64_t n_start = 0, n_end = 0;
  std::vector<CountVector> finals;  // per replica
  EmpiricalDistribution all, first_half, second_half;
  double tv_halves = 0.0;
};

/// Replica r uses seed derive_seed(seed, r); the halves are replicas
/// [0, R/2) and [R/2, R).
LimitSimulation simulate_limit(const ChainSpec& spec, std::uint64_t n_start, std::uint64_t n_end, std::size_t replicas,
                               std::uint64_t seed, std::vector<std::int64_t> cap = {}, int jobs = 1);

/// Fraction of embedded-chain steps spent in each state, starting from 0.
EmpiricalDistribution embedded_occupation(const ChainSpec& spec, std::size_t steps, std::uint64_t seed,
                                          std::vector<std::int64_t> cap = {});

struct StationaryResult {
  std::map<CountVector, double> pi;
  double residual = 0.0;  // max |pi P - pi|
  std::size_t iterations = 0;
  double boundary_mass = 0.0;  // mass on states with a coordinate at its box edge
};

/// Stationary law of the embedded chain restricted to prod [0, box_i]; jumps
/// that would leave the box are turned into holds. Lazy power iteration.
/// Throws PropertyViolation when the iteration cap is reached.
StationaryResult stationary_truncated(const ChainSpec& spec, const std::vector<std::int64_t>& box, double tol = 1e-13,
                                      std::size_t max_iter = 2'000'000);

/// Reweights an embedded-chain law by 1/D, the mean holding time of the
/// inhomogeneous chain in log-time.
std::map<CountVector, double> reweight_by_holding(const ChainSpec& spec, const std::map<CountVector, double>& pi);

/// Poisson(lambda) on {0..cap}, renormalized.
std::map<CountVector, double> poisson_law(double lambda, std::int64_t cap);

/// Exit rate from the last non-complete type: m / (1 - rho_d).
double exit_rate(int m, int d);

struct DerivedChain {
  ChainSpec spec;
  std::string complete_code;
  double rho_d = 0.0;
  std::vector<double> open_pair_density;  // flattened (a, b) table, a, b in [m, d-1]
};

/// Rates for triangles (ell = 3) with depth k = 1, where a type is the set of
/// degrees on the triangle. Creation uses the density of adjacent open pairs
/// from the depth-2 tree fixed point.
DerivedChain derive_constants(int m, int d, int ell, int k);

struct UnicyclicSample {
  std::uint64_t n = 0;
  std::map<std::string, std::size_t> noncomplete;  // code -> count
  std::size_t complete = 0;
  std::size_t multicyclic = 0;
};

/// Grows `replicas` graphs through n_grid and records the unicyclic census of
/// (ell, k) at each grid point. Result indexed [replica][grid].
std::vector<std::vector<UnicyclicSample>> sample_unicyclic_counts(int m, int d, int ell, int k,
                                                                  const std::vector<std::uint64_t>& n_grid,
                                                                  std::size_t replicas, std::uint64_t seed,
                                                                  int jobs = 1);

/// Projects a sample onto a label list; codes not in the list go to `unlisted`.
CountVector count_vector(const UnicyclicSample& s, const std::vector<std::string>& labels,
                         std::size_t* unlisted = nullptr);

struct GraphChainComparison {
  int m = 0, d = 0, ell = 0, k = 0;
  std::uint64_t n = 0;
  std::size_t replicas = 0;
  EmpiricalDistribution graph, chain;
  double tv = 0.0;
  std::size_t unlisted_copies = 0;
  std::vector<std::size_t> complete_counts;
  double complete_q05 = 0, complete_q50 = 0, complete_q95 = 0;
  double frac_complete_above_10 = 0.0;
};

/// Compares the graph's non-complete count vector with the chain at the same
/// n. With k = 0 the graph side is the single depth-0 count and the chain side
/// the total of its vector. With m = 1 graphs are forests, both sides are the
/// empty vector and the spec is ignored.
GraphChainComparison compare_graph_vs_chain(int m, int d, int ell, int k, const ChainSpec* spec, std::uint64_t n,
                                            std::size_t replicas, std::uint64_t seed,
                                            std::vector<std::int64_t> cap = {}, int jobs = 1,
                                            std::uint64_t chain_start = 1000);

double quantile(std::vector<double> v, double q);

}  // namespace uagraph
