#include "uagraph/markov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "uagraph/degree_dynamics.hpp"
#include "uagraph/error.hpp"
#include "uagraph/parallel.hpp"
#include "uagraph/sampling.hpp"
#include "uagraph/tree_types.hpp"

namespace uagraph {

// ---------------------------------------------------------------------------
// Spec

void ChainSpec::validate() const {
  if (K < 1) throw ValidationError("chain needs K >= 1");
  const auto k = static_cast<std::size_t>(K);
  if (c.size() != k) throw ValidationError(fmt::format("expected {} creation rates, got {}", K, c.size()));
  if (c_pair.size() != k) throw ValidationError("c_pair must be K x K");
  for (const auto& row : c_pair)
    if (row.size() != k) throw ValidationError("c_pair must be K x K");
  if (!labels.empty() && labels.size() != k) throw ValidationError("labels must have K entries");
  for (double v : c)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("creation rates must be finite and non-negative");
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i) {
      const double v = c_pair[j][i];
      if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("conversion rates must be finite and non-negative");
      if (i <= j && v != 0.0)
        throw ValidationError(fmt::format("conversion {} -> {} goes downward; only j < i is allowed", j + 1, i + 1));
    }
  if (!(c[0] > 0.0)) throw ValidationError("c_1 must be positive");
  if (!(c_out > 0.0) || !std::isfinite(c_out)) throw ValidationError("c_out must be positive");
  // forward reachability from type 1
  std::vector<char> from1(k, 0);
  from1[0] = 1;
  for (std::size_t j = 0; j < k; ++j)
    if (from1[j])
      for (std::size_t i = j + 1; i < k; ++i)
        if (c_pair[j][i] > 0.0) from1[i] = 1;
  // backward reachability of type K
  std::vector<char> toK(k, 0);
  toK[k - 1] = 1;
  for (std::size_t j = k - 1; j-- > 0;)
    for (std::size_t i = j + 1; i < k; ++i)
      if (c_pair[j][i] > 0.0 && toK[i]) toK[j] = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (!from1[i]) throw ValidationError(fmt::format("type {} is not reachable from type 1", i + 1));
    if (!toK[i]) throw ValidationError(fmt::format("type {} cannot reach type K", i + 1));
  }
}

double ChainSpec::total_rate(const CountVector& s) const {
  double total = std::accumulate(c.begin(), c.end(), 0.0);
  for (int j = 0; j < K; ++j) {
    if (s[j] == 0) continue;
    double row = 0.0;
    for (int i = j + 1; i < K; ++i) row += c_pair[j][i];
    total += row * static_cast<double>(s[j]);
  }
  return total + c_out * static_cast<double>(s[K - 1]);
}

ChainSpec ChainSpec::from_json(const nlohmann::json& j) {
  ChainSpec s;
  try {
    s.K = j.at("K").get<int>();
    s.c = j.at("c").get<std::vector<double>>();
    s.c_out = j.at("c_out").get<double>();
    if (j.contains("c_pair")) {
      s.c_pair = j.at("c_pair").get<std::vector<std::vector<double>>>();
    } else if (s.K > 0) {
      s.c_pair.assign(static_cast<std::size_t>(s.K), std::vector<double>(static_cast<std::size_t>(s.K), 0.0));
    }
    if (j.contains("labels")) s.labels = j.at("labels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("bad chain spec: {}", e.what()));
  }
  s.validate();
  return s;
}

nlohmann::json ChainSpec::to_json() const {
  nlohmann::json j;
  j["K"] = K;
  j["c"] = c;
  j["c_pair"] = c_pair;
  j["c_out"] = c_out;
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

ChainSpec load_chain_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open chain spec '{}'", path));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("chain spec '{}' is not valid JSON: {}", path, e.what()));
  }
  return ChainSpec::from_json(j);
}

ChainSpec birth_death_spec(double c1, double c_out) {
  ChainSpec s;
  s.K = 1;
  s.c = {c1};
  s.c_pair = {{0.0}};
  s.c_out = c_out;
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Transitions

std::vector<ChainMove> chain_moves(const ChainSpec& spec, const CountVector& s) {
  if (s.size() != static_cast<std::size_t>(spec.K)) throw ValidationError("state has the wrong dimension");
  std::vector<ChainMove> moves;
  for (int i = 0; i < spec.K; ++i)
    if (spec.c[i] > 0.0) moves.push_back({-1, i, spec.c[i]});
  for (int j = 0; j < spec.K; ++j) {
    if (s[j] < 0) throw ValidationError("negative count in state");
    if (s[j] == 0) continue;
    for (int i = j + 1; i < spec.K; ++i)
      if (spec.c_pair[j][i] > 0.0) moves.push_back({j, i, spec.c_pair[j][i] * static_cast<double>(s[j])});
  }
  if (s[spec.K - 1] > 0) moves.push_back({spec.K - 1, -1, spec.c_out * static_cast<double>(s[spec.K - 1])});
  return moves;
}

CountVector apply_move(CountVector s, const ChainMove& mv) {
  if (mv.from >= 0) --s[mv.from];
  if (mv.to >= 0) ++s[mv.to];
  return s;
}

StepLaw inhomogeneous_law(const ChainSpec& spec, const ChainState& st) {
  if (st.n == 0) throw ValidationError("time index must be positive");
  StepLaw law;
  law.moves = chain_moves(spec, st.S);
  const double n = static_cast<double>(st.n);
  double mass = 0.0;
  for (const auto& mv : law.moves) {
    law.prob.push_back(mv.weight / n);
    mass += mv.weight / n;
  }
  if (mass > 1.0)
    throw ModelViolation(fmt::format("jump probability {:.6g} exceeds 1 at n={}; start the chain later", mass, st.n));
  law.hold = 1.0 - mass;
  return law;
}

StepLaw embedded_law(const ChainSpec& spec, const CountVector& s) {
  StepLaw law;
  law.moves = chain_moves(spec, s);
  double total = 0.0;
  for (const auto& mv : law.moves) total += mv.weight;
  for (const auto& mv : law.moves) law.prob.push_back(mv.weight / total);
  law.hold = 0.0;
  return law;
}

namespace {

std::size_t pick(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  double x = u * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < weights[i]) return i;
    x -= weights[i];
  }
  return weights.size() - 1;
}

std::vector<double> move_weights(const std::vector<ChainMove>& moves) {
  std::vector<double> w;
  w.reserve(moves.size());
  for (const auto& mv : moves) w.push_back(mv.weight);
  return w;
}

}  // namespace

ChainState step_inhomogeneous(const ChainState& st, const ChainSpec& spec, Rng& rng) {
  const StepLaw law = inhomogeneous_law(spec, st);
  ChainState next{st.S, st.n + 1};
  double u = rng.uniform();
  for (std::size_t i = 0; i < law.moves.size(); ++i) {
    if (u < law.prob[i]) {
      next.S = apply_move(st.S, law.moves[i]);
      return next;
    }
    u -= law.prob[i];
  }
  return next;
}

ChainState step_embedded(const ChainState& st, const ChainSpec& spec, Rng& rng) {
  const auto moves = chain_moves(spec, st.S);
  return {apply_move(st.S, moves[pick(move_weights(moves), rng.uniform())]), st.n + 1};
}

CountVector run_inhomogeneous(const ChainSpec& spec, std::uint64_t n_start, std::uint64_t n_end, Rng& rng) {
  if (n_start == 0 || n_end < n_start) throw ValidationError("need 0 < n_start <= n_end");
  CountVector s(static_cast<std::size_t>(spec.K), 0);
  std::uint64_t n = n_start;
  while (n < n_end) {
    const auto moves = chain_moves(spec, s);
    double total = 0.0;
    for (const auto& mv : moves) total += mv.weight;
    if (total > static_cast<double>(n))
      throw ModelViolation(
          fmt::format("jump probability {:.6g} exceeds 1 at n={}; start the chain later", total / n, n));
    // the step from n to n+1 jumps with probability total/n
    const std::uint64_t j = first_success(total, n, n_end - 1, rng);
    if (j >= n_end) break;
    s = apply_move(s, moves[pick(move_weights(moves), rng.uniform())]);
    n = j + 1;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Distributions

CountVector EmpiricalDistribution::truncate(const CountVector& s) const {
  if (cap_.empty()) return s;
  if (cap_.size() != s.size()) throw ValidationError("cap and state dimensions differ");
  CountVector t = s;
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::min(t[i], cap_[i]);
  return t;
}

void EmpiricalDistribution::add(const CountVector& s, double weight) {
  weight_[truncate(s)] += weight;
  total_ += weight;
  ++samples_;
}

std::map<CountVector, double> EmpiricalDistribution::probabilities() const {
  std::map<CountVector, double> p;
  if (total_ <= 0.0) return p;
  for (const auto& [s, w] : weight_) p[s] = w / total_;
  return p;
}

double EmpiricalDistribution::probability(const CountVector& s) const {
  const auto it = weight_.find(truncate(s));
  return it == weight_.end() || total_ <= 0.0 ? 0.0 : it->second / total_;
}

EmpiricalDistribution EmpiricalDistribution::from_probabilities(const std::map<CountVector, double>& p,
                                                                std::vector<std::int64_t> cap) {
  EmpiricalDistribution e(std::move(cap));
  for (const auto& [s, w] : p) e.add(s, w);
  return e;
}

double total_variation(const std::map<CountVector, double>& a, const std::map<CountVector, double>& b) {
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      sum += std::abs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      sum += std::abs(ib->second);
      ++ib;
    } else {
      sum += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * sum;
}

double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  return total_variation(a.probabilities(), b.probabilities());
}

LimitSimulation simulate_limit(const ChainSpec& spec, std::uint64_t n_start, std::uint64_t n_end, std::size_t replicas,
                               std::uint64_t seed, std::vector<std::int64_t> cap, int jobs) {
  spec.validate();
  if (replicas < 2) throw ValidationError("need at least two replicas");
  LimitSimulation sim;
  sim.n_start = n_start;
  sim.n_end = n_end;
  sim.finals.resize(replicas);
  parallel_for(replicas, jobs, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    sim.finals[r] = run_inhomogeneous(spec, n_start, n_end, rng);
  });
  sim.all = EmpiricalDistribution(cap);
  sim.first_half = EmpiricalDistribution(cap);
  sim.second_half = EmpiricalDistribution(cap);
  for (std::size_t r = 0; r < replicas; ++r) {
    sim.all.add(sim.finals[r]);
    (r < replicas / 2 ? sim.first_half : sim.second_half).add(sim.finals[r]);
  }
  sim.tv_halves = total_variation(sim.first_half, sim.second_half);
  return sim;
}

EmpiricalDistribution embedded_occupation(const ChainSpec& spec, std::size_t steps, std::uint64_t seed,
                                          std::vector<std::int64_t> cap) {
  spec.validate();
  Rng rng(seed);
  EmpiricalDistribution occ(std::move(cap));
  ChainState st{CountVector(static_cast<std::size_t>(spec.K), 0), 0};
  for (std::size_t t = 0; t < steps; ++t) {
    st = step_embedded(st, spec, rng);
    occ.add(st.S);
  }
  return occ;
}

StationaryResult stationary_truncated(const ChainSpec& spec, const std::vector<std::int64_t>& box, double tol,
                                      std::size_t max_iter) {
  spec.validate();
  if (box.size() != static_cast<std::size_t>(spec.K)) throw ValidationError("box dimension differs from K");
  std::size_t states = 1;
  for (auto b : box) {
    if (b < 0) throw ValidationError("box bounds must be non-negative");
    states *= static_cast<std::size_t>(b + 1);
    if (states > 5'000'000) throw GuardExceeded("truncation box has too many states");
  }
  auto decode = [&](std::size_t idx) {
    CountVector s(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto w = static_cast<std::size_t>(box[i] + 1);
      s[i] = static_cast<std::int64_t>(idx % w);
      idx /= w;
    }
    return s;
  };
  auto encode = [&](const CountVector& s) {
    std::size_t idx = 0;
    for (std::size_t i = box.size(); i-- > 0;) idx = idx * static_cast<std::size_t>(box[i] + 1) + static_cast<std::size_t>(s[i]);
    return idx;
  };
  // sparse rows of the reflected embedded kernel
  struct Arc {
    std::size_t to;
    double p;
  };
  std::vector<std::vector<Arc>> rows(states);
  std::vector<double> stay(states, 0.0);
  for (std::size_t x = 0; x < states; ++x) {
    const CountVector s = decode(x);
    const StepLaw law = embedded_law(spec, s);
    for (std::size_t i = 0; i < law.moves.size(); ++i) {
      const CountVector t = apply_move(s, law.moves[i]);
      bool inside = true;
      for (std::size_t c = 0; c < t.size(); ++c)
        if (t[c] > box[c]) inside = false;
      if (inside) rows[x].push_back({encode(t), law.prob[i]});
      else stay[x] += law.prob[i];
    }
  }
  std::vector<double> pi(states, 1.0 / static_cast<double>(states)), next(states);
  StationaryResult res;
  for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
    for (std::size_t x = 0; x < states; ++x) next[x] = 0.5 * pi[x] + 0.5 * stay[x] * pi[x];
    for (std::size_t x = 0; x < states; ++x)
      for (const Arc& a : rows[x]) next[a.to] += 0.5 * pi[x] * a.p;
    double change = 0.0, total = 0.0;
    for (std::size_t x = 0; x < states; ++x) total += next[x];
    for (std::size_t x = 0; x < states; ++x) {
      next[x] /= total;
      change = std::max(change, std::abs(next[x] - pi[x]));
    }
    pi.swap(next);
    if (change < tol) break;
  }
  if (res.iterations > max_iter) throw PropertyViolation("stationary power iteration did not converge");
  // residual of pi P = pi for the unlazy kernel
  std::vector<double> image(states, 0.0);
  for (std::size_t x = 0; x < states; ++x) {
    image[x] += stay[x] * pi[x];
    for (const Arc& a : rows[x]) image[a.to] += pi[x] * a.p;
  }
  for (std::size_t x = 0; x < states; ++x) {
    res.residual = std::max(res.residual, std::abs(image[x] - pi[x]));
    const CountVector s = decode(x);
    bool edge = false;
    for (std::size_t c = 0; c < s.size(); ++c)
      if (s[c] == box[c] && box[c] > 0) edge = true;
    if (edge) res.boundary_mass += pi[x];
    res.pi[s] = pi[x];
  }
  return res;
}

std::map<CountVector, double> reweight_by_holding(const ChainSpec& spec, const std::map<CountVector, double>& pi) {
  std::map<CountVector, double> out;
  double total = 0.0;
  for (const auto& [s, p] : pi) {
    const double w = p / spec.total_rate(s);
    out[s] = w;
    total += w;
  }
  for (auto& [s, p] : out) p /= total;
  return out;
}

std::map<CountVector, double> poisson_law(double lambda, std::int64_t cap) {
  if (!(lambda > 0.0)) throw ValidationError("Poisson mean must be positive");
  std::map<CountVector, double> p;
  double total = 0.0;
  for (std::int64_t s = 0; s <= cap; ++s) {
    const double v = std::exp(static_cast<double>(s) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(s) + 1.0));
    p[{s}] = v;
    total += v;
  }
  for (auto& [s, v] : p) v /= total;
  return p;
}

// ---------------------------------------------------------------------------
// Rates from the graph process

double exit_rate(int m, int d) { return m / (1.0 - solve_rho(m, d).rho_d()); }

namespace {

// Triangle with deg_i - 2 pendant leaves on each corner.
std::string triangle_code(const std::array<int, 3>& deg, int k, int d) {
  int size = 3;
  for (int x : deg) size += x - 2;
  Graph g(static_cast<std::size_t>(std::max(d, 3)));
  for (int i = 0; i < size; ++i) g.add_vertex();
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(1, 3);
  Vertex next = 4;
  for (Vertex c = 1; c <= 3; ++c)
    for (int j = 0; j < deg[c - 1] - 2; ++j) g.add_edge(c, next++);
  const auto t = classify_cycle(g, canonical_cycle({1, 2, 3}), k, d);
  require(t.has_value(), "planted triangle ball is not unicyclic");
  return t->code;
}

std::array<int, 3> sorted_desc(std::array<int, 3> a) {
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

}  // namespace

DerivedChain derive_constants(int m, int d, int ell, int k) {
  if (m < 1 || d <= 2 * m) throw ValidationError(fmt::format("need m >= 1 and d > 2m (d = 2m is excluded), got m={} d={}", m, d));
  if (m == 1) throw ValidationError("m = 1 graphs are forests: every creation rate vanishes and the chain is degenerate");
  if (ell != 3) throw ValidationError(fmt::format("rate derivation supports only ell = 3, got {}", ell));
  if (k != 1)
    throw ValidationError(fmt::format(
        "rate derivation supports only k = 1, got {} (depth-0 counts are the total of the depth-1 chain)", k));

  const TreeFixedPoint fp = solve_tree_fixed_point(m, d, 2);
  DerivedChain out;
  out.rho_d = fp.degrees.rho_d();
  const double open = 1.0 - out.rho_d;

  // Ordered adjacent pairs (root degree a, neighbor degree b) per vertex.
  const int span = d - m + 1;
  std::vector<double> ordered(static_cast<std::size_t>(span * span), 0.0);
  const TreeLayer& layer = fp.layer(2);
  for (std::size_t t = 0; t < layer.types.size(); ++t) {
    const auto kids = child_codes(layer.types[t].code);
    const int a = static_cast<int>(kids.size());
    for (auto kc : kids) {
      const int b = static_cast<int>(child_codes(kc).size()) + 1;
      ordered[static_cast<std::size_t>((a - m) * span + (b - m))] += layer.rho[t];
    }
  }
  out.open_pair_density.assign(ordered.size(), 0.0);

  std::map<std::array<int, 3>, double> creation;
  for (int a = m; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const double e = a == b ? 0.5 * ordered[static_cast<std::size_t>((a - m) * span + (a - m))]
                              : 0.5 * (ordered[static_cast<std::size_t>((a - m) * span + (b - m))] +
                                       ordered[static_cast<std::size_t>((b - m) * span + (a - m))]);
      out.open_pair_density[static_cast<std::size_t>((a - m) * span + (b - m))] = e;
      if (e <= 0.0) continue;
      creation[sorted_desc({a + 1, b + 1, m})] += m * (m - 1) * e / (open * open);
    }

  // every non-complete triple reachable by single-corner increments
  const std::array<int, 3> full{d, d, d};
  std::set<std::array<int, 3>> reach;
  std::vector<std::array<int, 3>> queue;
  for (const auto& [t, r] : creation) {
    if (t != full && reach.insert(t).second) queue.push_back(t);
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto t = queue[q];
    for (int i = 0; i < 3; ++i) {
      if (t[i] >= d) continue;
      auto u = t;
      ++u[i];
      u = sorted_desc(u);
      if (u != full && reach.insert(u).second) queue.push_back(u);
    }
  }
  struct Entry {
    std::array<int, 3> deg;
    std::string code;
  };
  std::vector<Entry> types;
  for (const auto& t : reach) types.push_back({t, triangle_code(t, k, d)});
  std::sort(types.begin(), types.end(),
            [](const Entry& x, const Entry& y) { return compare_unicyclic_codes(x.code, y.code) < 0; });
  std::map<std::array<int, 3>, int> index;
  for (std::size_t i = 0; i < types.size(); ++i) index[types[i].deg] = static_cast<int>(i);

  ChainSpec& s = out.spec;
  s.K = static_cast<int>(types.size());
  s.c.assign(types.size(), 0.0);
  s.c_pair.assign(types.size(), std::vector<double>(types.size(), 0.0));
  const double hit = m / open;
  for (const auto& [t, r] : creation)
    if (t != full) s.c[static_cast<std::size_t>(index.at(t))] += r;
  for (std::size_t j = 0; j < types.size(); ++j) {
    s.labels.push_back(types[j].code);
    for (int i = 0; i < 3; ++i) {
      const auto t = types[j].deg;
      if (t[i] >= d) continue;
      auto u = t;
      ++u[i];
      u = sorted_desc(u);
      if (u == full) {
        require(j + 1 == types.size(), "only the largest non-complete type may complete");
        s.c_out += hit;
      } else {
        const auto to = static_cast<std::size_t>(index.at(u));
        require(to > j, "conversion must increase the type order");
        s.c_pair[j][to] += hit;
      }
    }
  }
  out.complete_code = triangle_code(full, k, d);
  s.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Graph side

std::vector<std::vector<UnicyclicSample>> sample_unicyclic_counts(int m, int d, int ell, int k,
                                                                  const std::vector<std::uint64_t>& n_grid,
                                                                  std::size_t replicas, std::uint64_t seed, int jobs) {
  if (n_grid.empty()) throw ValidationError("empty n grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) throw ValidationError("n grid must be ascending");
  if (ell < 3) throw ValidationError("cycle length must be at least 3");
  std::vector<std::vector<UnicyclicSample>> out(replicas);
  parallel_for(replicas, jobs, [&](std::size_t r) {
    const std::uint64_t s = derive_seed(seed, r);
    UAGraph g = UAGraph::seed(m, d, s);
    Rng rng(s);
    CycleTracker tracker(ell);
    for (std::uint64_t n : n_grid) {
      if (n < g.n()) throw ValidationError("grid point below the seed size");
      g.grow(n - g.n(), rng);
      tracker.update(g);
      const UnicyclicCensus c = census_unicyclic(g.graph(), d, ell, k, tracker.cycles());
      UnicyclicSample sample;
      sample.n = n;
      sample.complete = c.complete_count;
      sample.multicyclic = c.multicyclic_balls;
      for (const auto& [code, count] : c.counts)
        if (!c.complete.at(code)) sample.noncomplete[code] = count;
      out[r].push_back(std::move(sample));
    }
  });
  return out;
}

CountVector count_vector(const UnicyclicSample& s, const std::vector<std::string>& labels, std::size_t* unlisted) {
  CountVector v(labels.size(), 0);
  std::size_t missing = 0;
  for (const auto& [code, count] : s.noncomplete) {
    const auto it = std::find(labels.begin(), labels.end(), code);
    if (it == labels.end()) missing += count;
    else v[static_cast<std::size_t>(it - labels.begin())] = static_cast<std::int64_t>(count);
  }
  if (unlisted) *unlisted += missing;
  return v;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

GraphChainComparison compare_graph_vs_chain(int m, int d, int ell, int k, const ChainSpec* spec, std::uint64_t n,
                                            std::size_t replicas, std::uint64_t seed, std::vector<std::int64_t> cap,
                                            int jobs, std::uint64_t chain_start) {
  GraphChainComparison rep;
  rep.m = m;
  rep.d = d;
  rep.ell = ell;
  rep.k = k;
  rep.n = n;
  rep.replicas = replicas;
  // Depth 0 has a single non-complete type; it is compared through the total
  // of a depth-1 chain.
  const bool lumped = k == 0;
  std::vector<std::string> labels;
  if (m > 1) {
    if (!spec) throw ValidationError("a chain spec is required for m > 1");
    spec->validate();
    if (spec->labels.size() != static_cast<std::size_t>(spec->K))
      throw ValidationError("comparison needs a labelled chain spec (one type code per coordinate)");
    labels = spec->labels;
  }
  const std::size_t dim = m == 1 ? 0 : lumped ? 1 : labels.size();
  if (!cap.empty() && cap.size() != dim) throw ValidationError("cap dimension differs from the compared vector");
  auto total = [](const CountVector& v) { return CountVector{std::accumulate(v.begin(), v.end(), std::int64_t{0})}; };
  const auto samples = sample_unicyclic_counts(m, d, ell, k, {n}, replicas, derive_seed(seed, 1), jobs);
  rep.graph = EmpiricalDistribution(cap);
  std::vector<double> complete;
  for (const auto& run : samples) {
    if (m == 1) {
      rep.graph.add({});
    } else if (lumped) {
      std::int64_t t = 0;
      for (const auto& [code, count] : run.front().noncomplete) t += static_cast<std::int64_t>(count);
      rep.graph.add({t});
    } else {
      rep.graph.add(count_vector(run.front(), labels, &rep.unlisted_copies));
    }
    rep.complete_counts.push_back(run.front().complete);
    complete.push_back(static_cast<double>(run.front().complete));
  }
  rep.chain = EmpiricalDistribution(cap);
  if (m > 1) {
    const LimitSimulation sim = simulate_limit(*spec, chain_start, n, replicas, derive_seed(seed, 2), {}, jobs);
    for (const auto& f : sim.finals) rep.chain.add(lumped ? total(f) : f);
  } else {
    for (std::size_t r = 0; r < replicas; ++r) rep.chain.add({});
  }
  rep.tv = total_variation(rep.graph, rep.chain);
  rep.complete_q05 = quantile(complete, 0.05);
  rep.complete_q50 = quantile(complete, 0.5);
  rep.complete_q95 = quantile(complete, 0.95);
  rep.frac_complete_above_10 =
      static_cast<double>(std::count_if(complete.begin(), complete.end(), [](double x) { return x > 10; })) /
      static_cast<double>(complete.size());
  return rep;
}

}  // namespace uagraph
