#include "uagraph/stochastic_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "uagraph/degree_dynamics.hpp"
#include "uagraph/error.hpp"

namespace uagraph {

namespace {

double distance(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

State zeros(std::size_t n) { return State(n, 0.0); }

}  // namespace

SATrace run_sa(const SAProcess& p, const State& z0, std::size_t n_start, std::size_t n_end, std::uint64_t seed,
               double ratio) {
  if (z0.size() != p.dim) throw ValidationError("initial state has the wrong dimension");
  if (n_end < n_start) throw ValidationError("n_end precedes n_start");
  if (!(ratio > 1.0)) throw ValidationError("checkpoint ratio must exceed 1");
  if (p.in_domain && !p.in_domain(z0)) throw ValidationError("initial state lies outside U");
  Rng rng(seed);
  SATrace trace;
  State z = z0;
  auto record = [&](std::size_t n) {
    trace.n.push_back(n);
    trace.state.push_back(z);
    trace.error.push_back(p.theta ? distance(z, *p.theta) : std::numeric_limits<double>::quiet_NaN());
  };
  record(n_start);
  double next_mark = static_cast<double>(std::max<std::size_t>(n_start, 1)) * ratio;
  for (std::size_t n = n_start; n < n_end; ++n) {
    const State f = p.drift(z);
    const State e = p.noise ? p.noise(n, z, rng) : zeros(p.dim);
    const State r = p.bias ? p.bias(n, z) : zeros(p.dim);
    const double step = 1.0 / static_cast<double>(n + 1);
    for (std::size_t i = 0; i < p.dim; ++i) z[i] += step * (f[i] + e[i] + r[i]);
    if (p.in_domain && !p.in_domain(z)) {
      trace.left_domain = true;
      trace.halted_at = n + 1;
      record(n + 1);
      return trace;
    }
    if (static_cast<double>(n + 1) >= next_mark || n + 1 == n_end) {
      record(n + 1);
      while (next_mark <= static_cast<double>(n + 1)) next_mark *= ratio;
    }
  }
  return trace;
}

ConditionReport check_conditions(const SAProcess& p, const std::vector<State>& probes, const State& a3_start_state,
                                 const ConditionOptions& opt) {
  ConditionReport rep;
  rep.a1.name = "A1";
  rep.a2.name = "A2";
  rep.a3.name = "A3";
  if (!p.theta) throw ValidationError("condition checks need the root theta");
  const State& theta = *p.theta;

  // A1
  const Eigen::MatrixXd h = numeric_jacobian([&](std::span<const double> x) { return p.drift(State(x.begin(), x.end())); },
                                             theta);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(h, false);
  if (solver.info() != Eigen::Success) {
    rep.a1.evidence = "eigenvalue solver did not converge";
  } else {
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) top = std::max(top, solver.eigenvalues()[i].real());
    rep.top_real_part = top;
    const double l = -top;
    rep.a1.pass = top < 0 && l > 0.5;
    rep.a1.evidence = fmt::format("top real part {:.17g}, L = {:.17g}", top, l);
  }

  // A2
  std::size_t used = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const State& x : probes) {
    if (distance(x, theta) <= opt.epsilon) continue;
    const State f = p.drift(x);
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += f[i] * (x[i] - theta[i]);
    rep.a2_values.push_back(dot);
    worst = std::max(worst, dot);
    ++used;
  }
  rep.a2.pass = used > 0 && worst < 0;
  rep.a2.evidence = used ? fmt::format("{} probes, max F(x)^T(x-theta) = {:.17g}", used, worst) : "no usable probes";

  // A3
  if (!p.noise) {
    rep.a3.pass = true;
    rep.a3.evidence = "no noise";
    return rep;
  }
  Rng rng(opt.seed);
  State z = a3_start_state;
  const std::size_t blocks = 4;
  const std::size_t per_block = std::max<std::size_t>(opt.a3_steps / blocks, 1);
  std::vector<double> sum(p.dim, 0.0), sumsq(p.dim, 0.0), block_m2(blocks, 0.0);
  std::size_t count = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t s = 0; s < per_block; ++s) {
      const std::size_t n = opt.a3_start + count;
      const State f = p.drift(z);
      const State e = p.noise(n, z, rng);
      const State r = p.bias ? p.bias(n, z) : zeros(p.dim);
      double norm2 = 0.0;
      for (std::size_t i = 0; i < p.dim; ++i) {
        sum[i] += e[i];
        sumsq[i] += e[i] * e[i];
        norm2 += e[i] * e[i];
        z[i] += (f[i] + e[i] + r[i]) / static_cast<double>(n + 1);
      }
      block_m2[b] += norm2;
      ++count;
    }
    block_m2[b] /= static_cast<double>(per_block);
  }
  bool mean_ok = true;
  double worst_z = 0.0;
  for (std::size_t i = 0; i < p.dim; ++i) {
    const double mean = sum[i] / static_cast<double>(count);
    const double var = std::max(sumsq[i] / static_cast<double>(count) - mean * mean, 0.0);
    const double se = std::sqrt(var / static_cast<double>(count));
    if (se == 0.0) {
      if (std::abs(mean) > 1e-12) mean_ok = false;
      continue;
    }
    worst_z = std::max(worst_z, std::abs(mean) / se);
    if (std::abs(mean) > 4 * se) mean_ok = false;
  }
  const double m2_first = block_m2.front();
  const double m2_max = *std::max_element(block_m2.begin(), block_m2.end());
  const bool bounded = std::isfinite(m2_max) && m2_max <= 4 * m2_first + 1e-12;
  rep.a3.pass = mean_ok && bounded;
  rep.a3.evidence = fmt::format("{} samples, max |mean|/se = {:.4g}, block second moments first {:.6g} max {:.6g}",
                                count, worst_z, m2_first, m2_max);
  return rep;
}

State DegreeProcess::initial_state() const {
  const DegreeCensus c = census_degrees(*graph);
  return State(c.fractions.begin() + graph->m(), c.fractions.end());
}

DegreeProcess degree_process(int m, int d, std::uint64_t seed, std::size_t warmup_n) {
  DegreeProcess dp;
  auto rng = std::make_shared<Rng>(derive_seed(seed, 0));
  dp.graph = std::make_shared<UAGraph>(UAGraph::seed(m, d, seed));
  if (warmup_n > dp.graph->n()) dp.graph->grow(warmup_n - dp.graph->n(), *rng);
  const FixedPoint fp = solve_rho(m, d);
  const auto dim = static_cast<std::size_t>(d - m + 1);
  dp.process.dim = dim;
  dp.process.theta = fp.rho;
  dp.process.drift = [m, d](const State& x) { return drift_field(x, m, d); };
  auto graph = dp.graph;
  auto counts = std::make_shared<std::vector<std::size_t>>(census_degrees(*graph).counts);
  // The graph carries its own stream so the process is reproducible from `seed`.
  dp.process.noise = [graph, counts, rng, m, d](std::size_t n, const State& z, Rng&) {
    if (graph->n() != n)
      throw ValidationError(fmt::format("degree process is at n={} but the recursion asked for n={}", graph->n(), n));
    auto& c = *counts;
    for (Vertex t : graph->step(*rng)) {
      const std::size_t k = graph->graph().degree(t);
      --c[k - 1];
      ++c[k];
    }
    ++c[static_cast<std::size_t>(m)];
    const double inv = 1.0 / static_cast<double>(n + 1);
    const State f = drift_field(z, m, d);
    State e(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
      e[i] = static_cast<double>(n + 1) * (static_cast<double>(c[m + i]) * inv - z[i]) - f[i];
    return e;
  };
  const double cap = 2.0 * m / d;
  dp.process.in_domain = [cap](const State& x) {
    double s = 0.0;
    for (double v : x) {
      if (v < -1e-9) return false;
      s += v;
    }
    return s <= 1.0 + 1e-9 && x.back() <= cap + 1e-9;
  };
  return dp;
}

}  // namespace uagraph
