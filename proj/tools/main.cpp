// uagraph: command-line driver for the G_n(m, d) toolkit.
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "run_context.hpp"
#include "uagraph/cycles.hpp"
#include "uagraph/degree_dynamics.hpp"
#include "uagraph/ef_game.hpp"
#include "uagraph/error.hpp"
#include "uagraph/graph.hpp"
#include "uagraph/markov.hpp"
#include "uagraph/parallel.hpp"
#include "uagraph/tree_types.hpp"

namespace {

using nlohmann::json;
using namespace uagraph;
using cli::num;

// Values given on the command line; unset entries fall back to the config file
// and then to the defaults.
struct Flags {
  std::optional<int> m, d, ell, k, depth, rounds, jobs;
  std::optional<std::uint64_t> n, n0, N0;
  std::optional<double> tol;
  std::optional<std::string> seeds, chain_spec;
  std::string out, config;
};

json defaults() {
  return {{"m", 2},    {"d", 5},     {"n", 100000}, {"seeds", "1"}, {"ell", 3},      {"k", 1},
          {"depth", 2}, {"rounds", 1}, {"n0", 0},     {"N0", 0},      {"tol", 1e-12},  {"jobs", 1},
          {"chain_spec", ""}, {"n_start", 1000}, {"replicas", 1000}, {"box", 12}};
}

json effective_config(const Flags& f) {
  json cfg = defaults();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ValidationError(fmt::format("cannot open config file {}", f.config));
    json file;
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw ValidationError(fmt::format("config file {}: {}", f.config, e.what()));
    }
    if (!file.is_object()) throw ValidationError("config file must hold a JSON object");
    if (file.contains("command") && file.contains("config")) file = file["config"];  // a run manifest
    for (auto it = file.begin(); it != file.end(); ++it) {
      if (!cfg.contains(it.key())) throw ValidationError(fmt::format("unknown config key '{}'", it.key()));
      cfg[it.key()] = it.value();
    }
  }
  auto put = [&](const char* key, const auto& opt) {
    if (opt) cfg[key] = *opt;
  };
  put("m", f.m);
  put("d", f.d);
  put("n", f.n);
  put("seeds", f.seeds);
  put("ell", f.ell);
  put("k", f.k);
  put("depth", f.depth);
  put("rounds", f.rounds);
  put("n0", f.n0);
  put("N0", f.N0);
  put("tol", f.tol);
  put("jobs", f.jobs);
  put("chain_spec", f.chain_spec);
  if (cfg["seeds"].is_number_integer()) cfg["seeds"] = std::to_string(cfg["seeds"].get<std::uint64_t>());
  return cfg;
}

void validate_md(int m, int d) {
  if (m < 1) throw ValidationError(fmt::format("m must be at least 1, got {}", m));
  if (d <= 2 * m)
    throw ValidationError(fmt::format("need d > 2m; d = {} with m = {} is excluded (the case d = 2m is not covered)", d, m));
}

template <class T>
T get(const json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(fmt::format("config value '{}' has the wrong type", key));
  }
}

std::string snapshot_text(const UAGraph& g) {
  std::ostringstream os;
  write_snapshot(g, os);
  return os.str();
}

// ---------------------------------------------------------------------------

void cmd_generate(cli::RunContext& run) {
  const auto& c = run.config();
  const int m = get<int>(c, "m"), d = get<int>(c, "d");
  validate_md(m, d);
  const auto n = get<std::uint64_t>(c, "n");
  const auto seeds = cli::parse_seeds(get<std::string>(c, "seeds"));
  std::vector<std::string> snaps(seeds.size());
  std::vector<std::string> rows(seeds.size());
  parallel_for(seeds.size(), get<int>(c, "jobs"), [&](std::size_t r) {
    const UAGraph g = generate(m, d, n, seeds[r]);
    snaps[r] = snapshot_text(g);
    rows[r] = fmt::format("{},{},{},{},{}\n", seeds[r], g.n(), g.graph().edge_count(), g.open_count(),
                          g.saturated_count());
  });
  std::string csv = "seed,n,edges,open,saturated\n";
  for (std::size_t r = 0; r < seeds.size(); ++r) {
    run.write(fmt::format("graph_seed{}.txt", seeds[r]), snaps[r]);
    csv += rows[r];
  }
  run.write("generate.csv", csv);
}

void cmd_degrees(cli::RunContext& run) {
  const auto& c = run.config();
  const int m = get<int>(c, "m"), d = get<int>(c, "d");
  validate_md(m, d);
  const auto n = get<std::uint64_t>(c, "n");
  if (n < static_cast<std::uint64_t>(m)) throw ValidationError("n must be at least m");
  const auto seeds = cli::parse_seeds(get<std::string>(c, "seeds"));
  std::vector<std::size_t> grid;
  for (auto x : cli::checkpoint_grid(n)) grid.push_back(x);
  if (grid.front() < static_cast<std::size_t>(m)) grid.front() = static_cast<std::size_t>(m);
  const auto rep = convergence_experiment(m, d, grid, seeds, get<int>(c, "jobs"));
  std::string jsonl;
  for (const auto& row : rep.rows) {
    jsonl += fmt::format(R"({{"n":{},"seed":{},"k":{},"count":{},"X_k":{},"rho_k":{},"abs_err":{}}})", row.n,
                         seeds[static_cast<std::size_t>(row.replica)], row.k, row.count, num(row.fraction),
                         std::isnan(row.rho) ? "null" : num(row.rho), std::isnan(row.abs_err) ? "null" : num(row.abs_err));
    jsonl += '\n';
  }
  run.write("degrees.jsonl", jsonl);
  std::string table = "n,replica,k,N_k,X_k,rho_k,abs_err\n";
  for (const auto& row : rep.rows)
    table += fmt::format("{},{},{},{},{},{},{}\n", row.n, row.replica, row.k, row.count, num(row.fraction),
                         std::isnan(row.rho) ? "NA" : num(row.rho), std::isnan(row.abs_err) ? "NA" : num(row.abs_err));
  run.write("degrees.csv", table);
  const FixedPoint fp = solve_rho(m, d, get<double>(c, "tol"));
  const StabilityReport st = stability_at(fp.rho, m, d);
  json eig = json::array();
  for (const auto& z : st.eigenvalues) eig.push_back({z.real(), z.imag()});
  const json report = {{"m", m},           {"d", d},          {"rho", fp.rho}, {"residual", fp.residual},
                       {"eigenvalues", eig}, {"slope", rep.slope}};
  run.write("degrees_report.json", report.dump(2) + "\n");
  std::string summary = "n,mean_max_err,max_max_err\n";
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    double mean = 0, worst = 0;
    for (double e : rep.max_err[gi]) {
      mean += e;
      worst = std::max(worst, e);
    }
    mean /= static_cast<double>(seeds.size());
    summary += fmt::format("{},{},{}\n", grid[gi], num(mean), num(worst));
  }
  run.write("degrees_summary.csv", summary);
  fmt::print("log-log error slope {}\n", num(rep.slope));
}

void cmd_fixed_point(cli::RunContext* run, const json& c) {
  const int m = get<int>(c, "m"), d = get<int>(c, "d");
  validate_md(m, d);
  const FixedPoint fp = solve_rho(m, d);
  const StabilityReport st = stability_report(fp);
  std::string csv = "k,rho_k\n";
  double sum = 0;
  for (int k = m; k <= d; ++k) {
    csv += fmt::format("{},{}\n", k, num(fp.rho_k(k)));
    sum += fp.rho_k(k);
  }
  fmt::print("{}", csv);
  fmt::print("sum,{}\nresidual,{}\ntop_real_part,{}\nP(-1),{}\n", num(sum), num(fp.residual), num(st.top_real_part),
             num(st.p_at_minus_one));
  if (!run) return;
  run->write("fixed_point.csv", csv);
  json eig = json::array();
  for (const auto& z : st.eigenvalues) eig.push_back({num(z.real()), num(z.imag())});
  json q = json::array();
  for (double x : st.q_coefficients) q.push_back(num(x));
  const json out = {{"m", m},          {"d", d},
                    {"sum", num(sum)}, {"residual", num(fp.residual)},
                    {"top_real_part", num(st.top_real_part)}, {"p_at_minus_one", num(st.p_at_minus_one)},
                    {"eigenvalues", eig}, {"q_coefficients", q}};
  run->write("stability.json", out.dump(2) + "\n");
}

void cmd_trees(cli::RunContext& run) {
  const auto& c = run.config();
  const int m = get<int>(c, "m"), d = get<int>(c, "d"), depth = get<int>(c, "depth");
  validate_md(m, d);
  if (depth < 1) throw ValidationError("--depth must be at least 1");
  const auto n = get<std::uint64_t>(c, "n");
  const auto seeds = cli::parse_seeds(get<std::string>(c, "seeds"));
  const TreeFixedPoint fp = solve_tree_fixed_point(m, d, depth, get<double>(c, "tol"));
  std::vector<TreeCensus> census(seeds.size());
  parallel_for(seeds.size(), get<int>(c, "jobs"), [&](std::size_t r) {
    census[r] = census_trees(generate(m, d, n, seeds[r]).graph(), depth);
  });
  std::map<std::string, double, CodeLess> mean;
  for (const auto& t : fp.layer(depth).types) mean[t.code] = 0.0;
  std::size_t excluded = 0;
  for (const auto& cs : census) {
    for (const auto& [code, cnt] : cs.counts) mean[code] += static_cast<double>(cnt) / static_cast<double>(cs.n);
    excluded += cs.excluded;
  }
  std::string csv = "depth,code,rho_T,empirical_mean,abs_err\n";
  double worst = 0;
  for (auto& [code, x] : mean) {
    x /= static_cast<double>(seeds.size());
    const double rho = fp.density(depth, code);
    worst = std::max(worst, std::abs(x - rho));
    csv += fmt::format("{},\"{}\",{},{},{}\n", depth, code, num(rho), num(x), num(std::abs(x - rho)));
  }
  run.write("trees.csv", csv);
  std::string jsonl;
  for (const auto& [code, x] : mean) {
    std::size_t total = 0;
    for (const auto& cs : census)
      if (auto it = cs.counts.find(code); it != cs.counts.end()) total += it->second;
    jsonl += json{{"code", code}, {"depth", depth}, {"count", total}, {"fraction", x}, {"rho", fp.density(depth, code)}}
                 .dump() +
             "\n";
  }
  run.write("trees.jsonl", jsonl);
  fmt::print("{} types at depth {}; max abs deviation {}; excluded vertices {}\n", fp.layer(depth).types.size(), depth,
             num(worst), excluded);
}

void cmd_cycles(cli::RunContext& run) {
  const auto& c = run.config();
  const int m = get<int>(c, "m"), d = get<int>(c, "d"), ell = get<int>(c, "ell"), k = get<int>(c, "k");
  validate_md(m, d);
  if (ell < 3) throw ValidationError("--ell must be at least 3");
  if (k < 0) throw ValidationError("--k must be non-negative");
  const auto n = get<std::uint64_t>(c, "n");
  const auto seeds = cli::parse_seeds(get<std::string>(c, "seeds"));
  const auto grid = cli::checkpoint_grid(n);
  struct Out {
    std::string counts, cycles, census;
  };
  std::vector<Out> outs(seeds.size());
  parallel_for(seeds.size(), get<int>(c, "jobs"), [&](std::size_t r) {
    UAGraph g = UAGraph::seed(m, d, seeds[r]);
    Rng rng(seeds[r]);
    CycleTracker tracker(ell);
    Out& o = outs[r];
    for (auto x : grid) {
      if (x > g.n()) g.grow(x - g.n(), rng);
      tracker.update(g);
      for (int len = 3; len <= ell; ++len) o.counts += fmt::format("{},{},{},{}\n", seeds[r], g.n(), len, tracker.count(len));
    }
    for (const auto& cyc : tracker.cycles()) {
      o.cycles += fmt::format("{},{}", seeds[r], cyc.length);
      for (Vertex v : cyc.vertices) o.cycles += fmt::format(",{}", v);
      o.cycles += '\n';
    }
    std::vector<CycleRecord> exact;
    for (const auto& cyc : tracker.cycles())
      if (cyc.length == ell) exact.push_back(cyc);
    const UnicyclicCensus cs = census_unicyclic(g.graph(), d, ell, k, exact);
    for (const auto& [code, cnt] : cs.counts)
      o.census += fmt::format(R"({{"seed":{},"n":{},"ell":{},"k":{},"code":"{}","count":{},"complete":{}}})", seeds[r],
                              g.n(), ell, k, code, cnt, cs.complete.at(code) ? "true" : "false") +
                  "\n";
    o.census += fmt::format(R"({{"seed":{},"n":{},"ell":{},"k":{},"multicyclic_balls":{}}})", seeds[r], g.n(), ell, k,
                            cs.multicyclic_balls) +
                "\n";
  });
  std::string counts = "seed,n,length,count\n", cycles, census;
  for (const auto& o : outs) {
    counts += o.counts;
    cycles += o.cycles;
    census += o.census;
  }
  run.write("cycle_counts.csv", counts);
  run.write("cycles.csv", cycles);
  run.write("unicyclic.jsonl", census);
}

std::string vec_text(const CountVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

void cmd_markov(cli::RunContext& run) {
  const auto& c = run.config();
  const auto path = get<std::string>(c, "chain_spec");
  ChainSpec spec;
  if (!path.empty()) {
    spec = load_chain_spec(path);
  } else {
    const int m = get<int>(c, "m"), d = get<int>(c, "d");
    validate_md(m, d);
    spec = derive_constants(m, d, get<int>(c, "ell"), get<int>(c, "k")).spec;
  }
  spec.validate();
  run.write("chain_spec.json", spec.to_json().dump(2) + "\n");
  const auto n = get<std::uint64_t>(c, "n");
  const auto n_start = get<std::uint64_t>(c, "n_start");
  if (n <= n_start) throw ValidationError(fmt::format("need n > n_start, got n={} n_start={}", n, n_start));
  const auto seeds = cli::parse_seeds(get<std::string>(c, "seeds"));
  const auto replicas = get<std::size_t>(c, "replicas");
  const auto box = get<std::int64_t>(c, "box");
  const std::vector<std::int64_t> cap(static_cast<std::size_t>(spec.K), box);
  const LimitSimulation sim = simulate_limit(spec, n_start, n, replicas, seeds.front(), cap, get<int>(c, "jobs"));

  std::map<CountVector, double> stationary;
  double states = 1;
  for (int i = 0; i < spec.K; ++i) states *= static_cast<double>(box + 1);
  if (states <= 5e6) stationary = reweight_by_holding(spec, stationary_truncated(spec, cap).pi);
  std::string csv = "state,empirical,stationary_reweighted\n";
  auto emp = sim.all.probabilities();
  std::map<CountVector, std::pair<double, double>> rows;
  for (const auto& [s, p] : emp) rows[s].first = p;
  for (const auto& [s, p] : stationary) rows[s].second = p;
  for (const auto& [s, p] : rows) csv += fmt::format("{},{},{}\n", vec_text(s), num(p.first), num(p.second));
  run.write("markov_limit.csv", csv);
  std::string dist;
  for (const auto& [st, p] : emp) dist += json{{"state", st}, {"probability", p}}.dump() + "\n";
  run.write("markov_limit.jsonl", dist);
  const json summary = {{"replicas", replicas},
                        {"n_start", n_start},
                        {"n", n},
                        {"tv_halves", num(sim.tv_halves)},
                        {"tv_vs_stationary", stationary.empty() ? json(nullptr)
                                                                : json(num(total_variation(emp, stationary)))}};
  run.write("markov_summary.json", summary.dump(2) + "\n");
  fmt::print("{}\n", summary.dump());
}

void cmd_efgame(cli::RunContext& run, const std::string& file1, const std::string& file2) {
  const auto& c = run.config();
  const int R = get<int>(c, "rounds");
  Graph g1, g2;
  if (!file1.empty() || !file2.empty()) {
    if (file1.empty() || file2.empty()) throw ValidationError("efgame needs both --graph1 and --graph2");
    g1 = read_any_graph(file1);
    g2 = read_any_graph(file2);
  } else {
    // one grown run: G_n and its prefix G_{n/2}
    const int m = get<int>(c, "m"), d = get<int>(c, "d");
    validate_md(m, d);
    const auto n = get<std::uint64_t>(c, "n");
    const auto seed = cli::parse_seeds(get<std::string>(c, "seeds")).front();
    UAGraph g = UAGraph::seed(m, d, seed);
    Rng rng(seed);
    g.grow(n / 2 - g.n(), rng);
    g2 = g.graph();
    g.grow(n - g.n(), rng);
    g1 = g.graph();
  }
  json out = {{"n1", g1.size()}, {"n2", g2.size()}, {"rounds", R}};
  const EfOptions opt;
  if (g1.size() <= opt.size_cap && g2.size() <= opt.size_cap && R <= opt.max_rounds)
    out["ef_solve"] = to_string(ef_solve(g1, g2, R, opt));
  const auto n0 = get<Vertex>(c, "n0"), N0 = get<Vertex>(c, "N0");
  std::string transcript;
  if (N0 > 0) {
    const GameConfig cfg = GameConfig::make(R, n0, N0, get<int>(c, "m"), get<int>(c, "d"));
    auto report = [](const PropertyReport& r) {
      return json{{"holds", r.holds}, {"clause", r.clause}, {"message", r.message}, {"witness", r.witness}};
    };
    out["Q1"] = {report(check_Q1(g1, cfg)), report(check_Q1(g2, cfg))};
    if (g1.size() != g2.size())
      out["Q2"] = report(g1.size() > g2.size() ? check_Q2(g1, g2, cfg) : check_Q2(g2, g1, cfg));
    if (g1.size() <= opt.size_cap && g2.size() <= opt.size_cap) {
      const DuplicatorStrategy s(g1, g2, cfg, false);
      std::vector<MoveRecord> moves;
      const AdversaryResult res = exhaustive_adversary(s, R, 1000, &moves);
      out["strategy"] = {{"plays", res.plays}, {"losses", res.losses}, {"failures", res.strategy_failures}};
      for (const auto& mv : moves) transcript += mv.to_json().dump() + "\n";
      for (const auto& mv : res.first_bad_play) transcript += mv.to_json().dump() + "\n";
    }
  }
  run.write("efgame.json", out.dump(2) + "\n");
  if (!transcript.empty()) run.write("transcript.jsonl", transcript);
  fmt::print("{}\n", out.dump());
}

// Turns a finished run's primary output into CSV.
void cmd_report(const std::string& dir, const std::string& out_file) {
  namespace fs = std::filesystem;
  std::ifstream mf(fs::path(dir) / "manifest.json");
  if (!mf) throw ValidationError(fmt::format("{} has no manifest.json", dir));
  const json manifest = json::parse(mf);
  const auto command = manifest.at("command").get<std::string>();
  std::string csv;
  auto read_lines = [&](const std::string& name) {
    std::ifstream in(fs::path(dir) / name);
    if (!in) throw ValidationError(fmt::format("run directory lacks {}", name));
    std::vector<json> rows;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) rows.push_back(json::parse(line));
    return rows;
  };
  auto field = [](const json& v) {
    if (v.is_null()) return std::string("NA");
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return num(v.get<double>());
    return v.dump();
  };
  if (command == "degrees") {
    csv = "n,k,X_k,rho_k,abs_err\n";
    for (const auto& r : read_lines("degrees.jsonl"))
      csv += fmt::format("{},{},{},{},{}\n", field(r["n"]), field(r["k"]), field(r["X_k"]), field(r["rho_k"]),
                         field(r["abs_err"]));
  } else if (command == "cycles") {
    csv = "seed,n,ell,k,code,count,complete\n";
    for (const auto& r : read_lines("unicyclic.jsonl"))
      if (r.contains("code"))
        csv += fmt::format("{},{},{},{},\"{}\",{},{}\n", field(r["seed"]), field(r["n"]), field(r["ell"]),
                           field(r["k"]), field(r["code"]), field(r["count"]), field(r["complete"]));
  } else {
    for (const auto& o : manifest.at("outputs")) {
      const auto name = o.at("file").get<std::string>();
      if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") {
        std::ifstream in(fs::path(dir) / name);
        std::stringstream ss;
        ss << in.rdbuf();
        csv = ss.str();
        break;
      }
    }
    if (csv.empty()) throw ValidationError(fmt::format("no tabular output for command '{}'", command));
  }
  if (out_file.empty()) {
    fmt::print("{}", csv);
  } else {
    std::ofstream out(out_file);
    out << csv;
    if (!out) throw ValidationError(fmt::format("cannot write {}", out_file));
  }
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--m", f.m, "older neighbors per arrival");
  sub->add_option("--d", f.d, "degree cap (d > 2m)");
  sub->add_option("--n", f.n, "final graph size");
  sub->add_option("--seeds", f.seeds, "seed count N (seeds 1..N) or comma list");
  sub->add_option("--ell", f.ell, "cycle length");
  sub->add_option("--k", f.k, "ball depth around cycles");
  sub->add_option("--depth", f.depth, "tree depth b");
  sub->add_option("--rounds", f.rounds, "game rounds R");
  sub->add_option("--n0", f.n0, "inner cutoff");
  sub->add_option("--N0", f.N0, "outer cutoff");
  sub->add_option("--tol", f.tol, "solver tolerance");
  sub->add_option("--jobs", f.jobs, "worker threads");
  sub->add_option("--out", f.out, "run directory");
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_option("--chain-spec", f.chain_spec, "JSON chain rates");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform attachment graphs with bounded degree: simulation, censuses and game checks"};
  app.require_subcommand(1);
  Flags f;
  std::string graph1, graph2, run_dir, report_out;
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"generate", "degrees", "fixed-point", "trees", "cycles", "markov", "efgame"}) {
    subs[name] = app.add_subcommand(name);
    add_common(subs[name], f);
  }
  subs["generate"]->description("grow graphs and write snapshots");
  subs["degrees"]->description("degree fractions against the fixed point on a checkpoint grid");
  subs["fixed-point"]->description("limiting degree fractions and stability");
  subs["trees"]->description("tree-type densities against the census");
  subs["cycles"]->description("short cycles and unicyclic census");
  subs["markov"]->description("limit chain of unicyclic counts");
  subs["efgame"]->description("Ehrenfeucht-Fraisse game and strategy checks");
  subs["efgame"]->add_option("--graph1", graph1, "first graph file");
  subs["efgame"]->add_option("--graph2", graph2, "second graph file");
  auto* report = app.add_subcommand("report", "CSV view of a finished run");
  report->add_option("--run", run_dir, "run directory")->required();
  report->add_option("--out", report_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (report->parsed()) {
      cmd_report(run_dir, report_out);
      return 0;
    }
    std::string command;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) command = name;
    const json cfg = effective_config(f);
    if (command == "fixed-point" && f.out.empty()) {
      cmd_fixed_point(nullptr, cfg);
      return 0;
    }
    cli::RunContext run(command, cfg, f.out);
    if (command == "generate") cmd_generate(run);
    else if (command == "degrees") cmd_degrees(run);
    else if (command == "fixed-point") cmd_fixed_point(&run, cfg);
    else if (command == "trees") cmd_trees(run);
    else if (command == "cycles") cmd_cycles(run);
    else if (command == "markov") cmd_markov(run);
    else if (command == "efgame") cmd_efgame(run, graph1, graph2);
    run.finish();
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
}
