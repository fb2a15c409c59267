#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uagraph/graph.hpp"

namespace uagraph {

/// Vertex counts by degree: counts[k] = N_k for k = 0..d.
struct DegreeCensus {
  std::size_t n = 0;
  std::vector<std::size_t> counts;
  std::vector<double> fractions;
};

DegreeCensus census_degrees(const UAGraph& g);

/// Limiting degree fractions. rho[i] is the limit of X_{m+i}, i = 0..d-m.
struct FixedPoint {
  int m = 0;
  int d = 0;
  std::vector<double> rho;
  double residual = 0.0;  // max_k |f_k(rho)|
  int iterations = 0;

  double rho_k(int k) const { return rho[static_cast<std::size_t>(k - m)]; }
  double rho_d() const { return rho.back(); }
};

/// Bisection for rho_d on (0, 2m/d), then the closed form for rho_m..rho_{d-1}.
FixedPoint solve_rho(int m, int d, double tol = 1e-14);

/// Drift (f_m, ..., f_d) at x = (x_m, ..., x_d). Throws ValidationError if x_d >= 1.
std::vector<double> drift_field(std::span<const double> x, int m, int d);

/// Analytic derivative matrix of the drift.
Eigen::MatrixXd drift_jacobian(std::span<const double> x, int m, int d);

/// Central-difference Jacobian of an arbitrary vector field.
template <class Field>
Eigen::MatrixXd numeric_jacobian(Field&& field, std::span<const double> x, double h = 1e-6) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd jac(n, n);
  std::vector<double> probe(x.begin(), x.end());
  for (Eigen::Index j = 0; j < n; ++j) {
    const double saved = probe[j];
    probe[j] = saved + h;
    const std::vector<double> up = field(std::span<const double>(probe));
    probe[j] = saved - h;
    const std::vector<double> down = field(std::span<const double>(probe));
    probe[j] = saved;
    for (Eigen::Index i = 0; i < n; ++i) jac(i, j) = (up[i] - down[i]) / (2 * h);
  }
  return jac;
}

struct StabilityReport {
  Eigen::MatrixXd jacobian;
  std::vector<std::complex<double>> eigenvalues;  // sorted by decreasing real part
  double top_real_part = 0.0;
  double c = 0.0;                      // m / (1 - x_d)
  std::vector<double> q_coefficients;  // Q(t) = sum_i q_i t^i, i = 0..d-m
  double p_at_minus_one = 0.0;         // det(J + I)
  double fd_deviation = 0.0;           // max |J - central differences|
  double charpoly_deviation = 0.0;     // max relative |det(lambda I - J) - t Q(t)| over probes
};

/// Assembles the Jacobian at the fixed point, its spectrum and Q(t). Throws
/// PropertyViolation if the top real part is not -1, P(-1) != 0 or a Q
/// coefficient is negative.
StabilityReport stability_report(const FixedPoint& fp);
/// Same quantities at an arbitrary point, without assertions.
StabilityReport stability_at(std::span<const double> x, int m, int d);

/// Coefficients of Q(t) at x (closed form).
std::vector<double> q_coefficients(std::span<const double> x, int m, int d);

/// Tail bounds for S_n = sum_{i=k}^n Bernoulli(p / i).
struct ChernoffBounds {
  double lower_tail = 0.0;  // bound on Pr(S_n <= lower_threshold)
  double upper_tail = 0.0;  // bound on Pr(S_n >= upper_threshold)
  double lower_threshold = 0.0;
  double upper_threshold = 0.0;
};

ChernoffBounds chernoff_bounds(double p, std::uint64_t k, std::uint64_t n, double delta);

/// Empirical tail frequencies of S_n over `trials` independent draws.
struct ChernoffSample {
  std::uint64_t trials = 0;
  std::uint64_t lower_hits = 0;
  std::uint64_t upper_hits = 0;
  double lower_freq() const { return static_cast<double>(lower_hits) / static_cast<double>(trials); }
  double upper_freq() const { return static_cast<double>(upper_hits) / static_cast<double>(trials); }
};

ChernoffSample simulate_bernoulli_tails(double p, std::uint64_t k, std::uint64_t n, double delta,
                                        std::uint64_t trials, std::uint64_t seed);

struct ConvergenceRow {
  std::size_t n = 0;
  int replica = 0;
  int k = 0;
  std::size_t count = 0;
  double fraction = 0.0;
  double rho = 0.0;  // NaN for k outside [m, d]
  double abs_err = 0.0;
};

struct ConvergenceReport {
  int m = 0;
  int d = 0;
  std::vector<std::size_t> n_grid;
  std::vector<std::uint64_t> seeds;
  std::vector<ConvergenceRow> rows;
  /// max_err[g][r] = max_{k in [m,d]} |X_k - rho_k| at n_grid[g], replica r.
  std::vector<std::vector<double>> max_err;
  double slope = 0.0;  // least-squares slope of log mean error against log n
};

/// Grows one graph per seed, recording the census at each n of the grid.
ConvergenceReport convergence_experiment(int m, int d, const std::vector<std::size_t>& n_grid,
                                         const std::vector<std::uint64_t>& seeds, int jobs = 1);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace uagraph
