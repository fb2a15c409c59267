#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uagraph/graph.hpp"
#include "uagraph/rng.hpp"

namespace uagraph {

using State = std::vector<double>;

/// Z(n+1) = Z(n) + (F(Z(n)) + E_{n+1} + R_{n+1}) / (n+1).
struct SAProcess {
  std::size_t dim = 0;
  std::function<State(const State&)> drift;
  std::optional<State> theta;
  /// E_{n+1} given n and Z(n). May be stateful (see degree_process).
  std::function<State(std::size_t n, const State& z, Rng& rng)> noise;
  /// R_{n+1} given n and Z(n).
  std::function<State(std::size_t n, const State& z)> bias;
  /// Membership in U.
  std::function<bool(const State&)> in_domain;
};

struct SATrace {
  std::vector<std::size_t> n;
  std::vector<State> state;
  std::vector<double> error;  // |Z(n) - theta| (Euclidean), NaN without theta
  bool left_domain = false;
  std::size_t halted_at = 0;
};

/// Applies the recursion from n_start to n_end; checkpoints at n_start, then a
/// geometric grid of ratio `ratio`, and n_end.
SATrace run_sa(const SAProcess& process, const State& z0, std::size_t n_start, std::size_t n_end,
               std::uint64_t seed, double ratio = 2.0);

struct ConditionCheck {
  std::string name;
  bool pass = false;
  std::string evidence;
};

struct ConditionReport {
  ConditionCheck a1, a2, a3;
  double top_real_part = 0.0;  // -L
  std::vector<double> a2_values;  // F(x)^T (x - theta) per probe outside the epsilon ball
  bool all_pass() const { return a1.pass && a2.pass && a3.pass; }
};

struct ConditionOptions {
  double epsilon = 1e-3;             // A2 ignores probes within this distance of theta
  std::size_t a3_start = 1000;       // A3 samples noise along a run from here
  std::size_t a3_steps = 20000;
  std::uint64_t seed = 1;
};

/// A1: numeric Jacobian at theta is stable with L > 1/2. A2: sign of
/// F(x)^T (x - theta) at the probes. A3: noise along a run has sample mean
/// within 4 standard errors of zero and block second moments that stay bounded.
ConditionReport check_conditions(const SAProcess& process, const std::vector<State>& probes,
                                 const State& a3_start_state, const ConditionOptions& options = {});

/// Degree-fraction process of G_n(m, d): Z(n) = (X_m(n), ..., X_d(n)), drift as
/// in drift_field, and noise produced by real arrivals in an owned graph.
/// The noise hook advances the graph by one vertex per call.
struct DegreeProcess {
  SAProcess process;
  std::shared_ptr<UAGraph> graph;
  State initial_state() const;
};

DegreeProcess degree_process(int m, int d, std::uint64_t seed, std::size_t warmup_n);

}  // namespace uagraph
