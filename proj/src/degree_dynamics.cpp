#include "uagraph/degree_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "uagraph/error.hpp"
#include "uagraph/parallel.hpp"
#include "uagraph/sampling.hpp"

namespace uagraph {

namespace {

void check_model(int m, int d) {
  if (m < 1) throw ValidationError("m must be at least 1");
  if (d <= 2 * m)
    throw ValidationError(fmt::format("d={} with m={} is outside the model: d > 2m is required", d, m));
}

void check_point(std::span<const double> x, int m, int d) {
  check_model(m, d);
  if (x.size() != static_cast<std::size_t>(d - m + 1))
    throw ValidationError(fmt::format("state has {} components, expected {}", x.size(), d - m + 1));
  if (!(x.back() < 1.0)) throw ValidationError("drift is undefined for x_d >= 1");
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

DegreeCensus census_degrees(const UAGraph& g) {
  DegreeCensus c;
  c.n = g.n();
  c.counts.assign(static_cast<std::size_t>(g.d()) + 1, 0);
  for (Vertex v = 1; v <= g.n(); ++v) ++c.counts[g.graph().degree(v)];
  c.fractions.resize(c.counts.size());
  for (std::size_t k = 0; k < c.counts.size(); ++k)
    c.fractions[k] = c.n ? static_cast<double>(c.counts[k]) / static_cast<double>(c.n) : 0.0;
  return c;
}

FixedPoint solve_rho(int m, int d, double tol) {
  check_model(m, d);
  if (!(tol > 0)) throw ValidationError("tolerance must be positive");
  const int e = d - m;
  auto g = [&](double x) { return std::pow(m / (m + 1.0 - x), e) - x; };
  double lo = 0.0, hi = 2.0 * m / d;
  if (!(g(lo) > 0 && g(hi) < 0))
    throw PropertyViolation(fmt::format("no sign change for the degree-cap equation on (0, {})", hi));
  FixedPoint fp;
  fp.m = m;
  fp.d = d;
  for (; fp.iterations < 200; ++fp.iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = g(mid);
    if (v == 0.0) {
      lo = hi = mid;
      break;
    }
    (v > 0 ? lo : hi) = mid;
    if (hi - lo < tol * 1e-3 && std::abs(v) < tol) break;
  }
  const double rd = 0.5 * (lo + hi);
  fp.rho.resize(static_cast<std::size_t>(e) + 1);
  for (int k = m; k < d; ++k)
    fp.rho[k - m] = (1 - rd) * std::pow(m, k - m) / std::pow(m + 1 - rd, k - m + 1);
  fp.rho[e] = rd;
  const auto f = drift_field(fp.rho, m, d);
  fp.residual = 0;
  for (double v : f) fp.residual = std::max(fp.residual, std::abs(v));
  const double total = std::accumulate(fp.rho.begin(), fp.rho.end(), 0.0);
  require(std::abs(total - 1.0) < 10 * tol + 1e-15,
          fmt::format("limiting fractions sum to {:.17g}, not 1", total));
  return fp;
}

std::vector<double> drift_field(std::span<const double> x, int m, int d) {
  check_point(x, m, d);
  const double c = m / (1.0 - x.back());
  const std::size_t last = x.size() - 1;
  std::vector<double> f(x.size());
  f[0] = 1.0 - (c + 1.0) * x[0];
  for (std::size_t i = 1; i < last; ++i) f[i] = c * x[i - 1] - (c + 1.0) * x[i];
  f[last] = c * x[last - 1] - x[last];
  return f;
}

Eigen::MatrixXd drift_jacobian(std::span<const double> x, int m, int d) {
  check_point(x, m, d);
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index last = n - 1;
  const double xd = x.back();
  const double c = m / (1.0 - xd);
  const double c2 = m / ((1.0 - xd) * (1.0 - xd));
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  j(0, 0) = -c - 1.0;
  j(0, last) = -c2 * x[0];
  for (Eigen::Index k = 1; k < last; ++k) {
    j(k, k - 1) = c;
    j(k, k) = -c - 1.0;
    j(k, last) = c2 * (x[k - 1] - x[k]);
  }
  j(last, last - 1) = c;
  j(last, last) = -1.0 + c2 * x[last - 1];
  return j;
}

std::vector<double> q_coefficients(std::span<const double> x, int m, int d) {
  check_point(x, m, d);
  const int e = d - m;
  // 1 - x_d written as the mass below degree d; equal on the simplex, and the
  // binomial sums below then cancel exactly in the constant term
  double mass = 0.0;
  for (int k = m; k <= d - 1; ++k) mass += x[k - m];
  const double c = m / mass;
  std::vector<double> q(static_cast<std::size_t>(e) + 1);
  q[e] = 1.0;
  for (int i = 0; i < e; ++i) {
    double s = 0.0;
    for (int k = m; k <= d - 1; ++k) s += (binom(e, i) - binom(k - m, i)) * x[k - m];
    q[i] = std::pow(c, e - i) * s / mass;
  }
  return q;
}

StabilityReport stability_at(std::span<const double> x, int m, int d) {
  StabilityReport r;
  r.jacobian = drift_jacobian(x, m, d);
  r.c = m / (1.0 - x.back());
  Eigen::EigenSolver<Eigen::MatrixXd> solver(r.jacobian, false);
  if (solver.info() != Eigen::Success) throw PropertyViolation("eigenvalue solver did not converge");
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) r.eigenvalues.push_back(solver.eigenvalues()[i]);
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(),
            [](auto a, auto b) { return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag(); });
  r.top_real_part = r.eigenvalues.front().real();
  r.q_coefficients = q_coefficients(x, m, d);
  const auto n = r.jacobian.rows();
  r.p_at_minus_one = (r.jacobian + Eigen::MatrixXd::Identity(n, n)).determinant();

  const Eigen::MatrixXd fd = numeric_jacobian([&](std::span<const double> p) { return drift_field(p, m, d); }, x);
  r.fd_deviation = (r.jacobian - fd).cwiseAbs().maxCoeff();

  // det(lambda I - J) must equal t Q(t) with t = 1 + lambda.
  for (double lambda : {-2.5, -1.7, -0.6, 0.0, 0.9}) {
    const double lhs = (lambda * Eigen::MatrixXd::Identity(n, n) - r.jacobian).determinant();
    const double t = 1.0 + lambda;
    double q = 0.0;
    for (auto it = r.q_coefficients.rbegin(); it != r.q_coefficients.rend(); ++it) q = q * t + *it;
    const double rhs = t * q;
    r.charpoly_deviation = std::max(r.charpoly_deviation, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return r;
}

StabilityReport stability_report(const FixedPoint& fp) {
  StabilityReport r = stability_at(fp.rho, fp.m, fp.d);
  require(std::abs(r.top_real_part + 1.0) < 1e-6,
          fmt::format("top real part {:.17g} differs from -1", r.top_real_part));
  require(std::abs(r.p_at_minus_one) < 1e-9, fmt::format("P(-1) = {:.17g} is not zero", r.p_at_minus_one));
  for (std::size_t i = 0; i < r.q_coefficients.size(); ++i)
    require(r.q_coefficients[i] >= -1e-12, fmt::format("Q coefficient {} is negative: {:.17g}", i, r.q_coefficients[i]));
  return r;
}

ChernoffBounds chernoff_bounds(double p, std::uint64_t k, std::uint64_t n, double delta) {
  if (!(p > 0)) throw ValidationError("p must be positive");
  if (!(k > 1 && k < n)) throw ValidationError("bounds require 1 < k < n");
  if (!(delta > 0)) throw ValidationError("delta must be positive");
  const double kn = static_cast<double>(k), nn = static_cast<double>(n);
  ChernoffBounds b;
  b.lower_tail = std::pow((nn + 1) / kn, -delta * delta * p / 2);
  b.upper_tail = std::pow(nn / (kn - 1), -delta * delta * p / (2 + delta));
  b.lower_threshold = (1 - delta) * p * (std::log(nn + 1) - std::log(kn));
  b.upper_threshold = (1 + delta) * p * (std::log(nn) - std::log(kn - 1));
  return b;
}

ChernoffSample simulate_bernoulli_tails(double p, std::uint64_t k, std::uint64_t n, double delta,
                                        std::uint64_t trials, std::uint64_t seed) {
  const ChernoffBounds b = chernoff_bounds(p, k, n, delta);
  Rng rng(seed);
  ChernoffSample s;
  s.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t sum = 0;
    for (std::uint64_t i = first_success(p, k, n, rng); i <= n; i = first_success(p, i + 1, n, rng)) ++sum;
    const auto total = static_cast<double>(sum);
    if (total <= b.lower_threshold) ++s.lower_hits;
    if (total >= b.upper_threshold) ++s.upper_hits;
  }
  return s;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport convergence_experiment(int m, int d, const std::vector<std::size_t>& n_grid,
                                         const std::vector<std::uint64_t>& seeds, int jobs) {
  const FixedPoint fp = solve_rho(m, d);
  if (n_grid.empty()) throw ValidationError("empty n grid");
  if (seeds.empty()) throw ValidationError("at least one replica is required");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < static_cast<std::size_t>(m)) throw ValidationError("grid points must be at least m");
    if (i && n_grid[i] <= n_grid[i - 1]) throw ValidationError("n grid must be strictly ascending");
  }
  ConvergenceReport rep;
  rep.m = m;
  rep.d = d;
  rep.n_grid = n_grid;
  rep.seeds = seeds;
  rep.max_err.assign(n_grid.size(), std::vector<double>(seeds.size(), 0.0));

  std::vector<std::vector<ConvergenceRow>> per_replica(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t r) {
    UAGraph g = UAGraph::seed(m, d, seeds[r]);
    Rng rng(seeds[r]);
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
      g.grow(n_grid[gi] - g.n(), rng);
      const DegreeCensus c = census_degrees(g);
      double worst = 0.0;
      for (int k = 0; k <= d; ++k) {
        ConvergenceRow row;
        row.n = c.n;
        row.replica = static_cast<int>(r);
        row.k = k;
        row.count = c.counts[k];
        row.fraction = c.fractions[k];
        if (k >= m) {
          row.rho = fp.rho_k(k);
          row.abs_err = std::abs(row.fraction - row.rho);
          worst = std::max(worst, row.abs_err);
        } else {
          row.rho = std::numeric_limits<double>::quiet_NaN();
          row.abs_err = std::numeric_limits<double>::quiet_NaN();
        }
        per_replica[r].push_back(row);
      }
      rep.max_err[gi][r] = worst;
    }
  });
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi)
    for (auto& rows : per_replica)
      for (const auto& row : rows)
        if (row.n == n_grid[gi]) rep.rows.push_back(row);
  if (n_grid.size() >= 2) {
    std::vector<double> xs, ys;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
      const double mean = std::accumulate(rep.max_err[gi].begin(), rep.max_err[gi].end(), 0.0) /
                          static_cast<double>(seeds.size());
      if (mean > 0) {
        xs.push_back(static_cast<double>(n_grid[gi]));
        ys.push_back(mean);
      }
    }
    rep.slope = xs.size() >= 2 ? loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
  } else {
    rep.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace uagraph
