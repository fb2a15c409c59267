#include <doctest.h>

#include <cmath>

#include "uagraph/degree_dynamics.hpp"
#include "uagraph/stochastic_approx.hpp"

using namespace uagraph;

namespace {

SAProcess linear(double theta, double sign = -1) {
  SAProcess p;
  p.dim = 1;
  p.drift = [=](const State& x) { return State{sign * (x[0] - theta)}; };
  p.theta = State{theta};
  return p;
}

}  // namespace

TEST_CASE("deterministic averaging telescopes") {
  const SAProcess p = linear(0.3);
  const SATrace t = run_sa(p, {2.0}, 10, 100000, 1);
  for (std::size_t i = 0; i < t.n.size(); ++i) {
    const double want = std::abs(2.0 - 0.3) * 10.0 / static_cast<double>(t.n[i]);
    if (t.n[i] == 10) continue;
    CHECK(std::abs(t.error[i] - want) < 1e-12);
  }
  for (std::size_t i = 1; i < t.n.size(); ++i) CHECK(t.n[i] > t.n[i - 1]);
}

TEST_CASE("noisy one-dimensional process contracts faster than n^-0.4") {
  SAProcess p = linear(0.0);
  p.noise = [](std::size_t, const State&, Rng& rng) { return State{rng.bernoulli(0.5) ? 1.0 : -1.0}; };
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SATrace t = run_sa(p, {0.5}, 1, 1000000, seed);
    worst = std::max(worst, t.error.back() * std::pow(static_cast<double>(t.n.back()), 0.4));
  }
  // |Z(n)| is about |N(0,1)| / sqrt(n), so the scaled error is about 0.25 |N(0,1)| at n = 1e6
  CHECK(worst < 1.0);
}

TEST_CASE("domain exit halts the run") {
  SAProcess p = linear(0.0, +1);
  p.in_domain = [](const State& x) { return std::abs(x[0]) < 10; };
  const SATrace t = run_sa(p, {1.0}, 1, 1000, 1);
  CHECK(t.left_domain);
  CHECK(t.halted_at > 0);
}

TEST_CASE("conditions on linear drifts") {
  const std::vector<State> probes{{1.0}, {-2.0}, {0.5}, {3.0}};
  const ConditionReport good = check_conditions(linear(0.0), probes, {0.0});
  CHECK(good.a1.pass);
  CHECK(good.a2.pass);
  CHECK(good.a3.pass);
  CHECK(good.top_real_part == doctest::Approx(-1.0).epsilon(1e-6));

  const ConditionReport bad = check_conditions(linear(0.0, +1), probes, {0.0});
  CHECK_FALSE(bad.a1.pass);
  CHECK_FALSE(bad.a2.pass);

  // adding probes cannot rescue A2
  auto more = probes;
  more.push_back({-0.7});
  CHECK_FALSE(check_conditions(linear(0.0, +1), more, {0.0}).a2.pass);
}

TEST_CASE("degree process") {
  const DegreeProcess dp = degree_process(1, 3, 7, 1000);
  const ConditionReport r = check_conditions(dp.process, {{0.5, 0.2, 0.3}, {0.3, 0.3, 0.4}}, dp.initial_state());
  CHECK(r.a1.pass);
  CHECK(r.top_real_part == doctest::Approx(-1.0).epsilon(1e-5));

  // the wrapper's graph noise reproduces the census at the end of the run
  DegreeProcess run = degree_process(2, 5, 21, 1000);
  const SATrace t = run_sa(run.process, run.initial_state(), 1000, 20000, 21);
  const DegreeCensus c = census_degrees(*run.graph);
  REQUIRE(c.n == 20000);
  for (std::size_t i = 0; i < t.state.back().size(); ++i)
    CHECK(std::abs(t.state.back()[i] - c.fractions[i + 2]) < 1e-9);
}
