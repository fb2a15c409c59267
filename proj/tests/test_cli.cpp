#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include "run_context.hpp"
#include "uagraph/degree_dynamics.hpp"
#include "uagraph/error.hpp"

using namespace uagraph;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(UAGRAPH_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) r.out += buf;
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("uagraph_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string x;
  while (std::getline(ss, x, ',')) f.push_back(x);
  return f;
}

}  // namespace

TEST_CASE("seed lists and checkpoint grid") {
  CHECK(cli::parse_seeds("3") == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cli::parse_seeds("7,") == std::vector<std::uint64_t>{7});
  CHECK(cli::parse_seeds("4,9,2") == std::vector<std::uint64_t>{4, 9, 2});
  CHECK_THROWS_AS(cli::parse_seeds("0"), ValidationError);
  CHECK_THROWS_AS(cli::parse_seeds("x"), ValidationError);
  CHECK_THROWS_AS(cli::parse_seeds("-2,3"), ValidationError);
  CHECK(cli::checkpoint_grid(5000) == std::vector<std::uint64_t>{1024, 2048, 4096, 5000});
  CHECK(cli::checkpoint_grid(4096) == std::vector<std::uint64_t>{1024, 2048, 4096});
  CHECK(cli::checkpoint_grid(100) == std::vector<std::uint64_t>{100});
}

TEST_CASE("digest and number format") {
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  for (double x : {0.1, 1.0 / 3.0, 2.0e-300, 0.38196601125010515})
    CHECK(std::stod(cli::num(x)) == x);
}

TEST_CASE("manifest records outputs") {
  TempDir tmp;
  cli::RunContext ctx("degrees", {{"m", 2}}, (tmp.path / "run").string());
  ctx.write("a.csv", "x\n1\n");
  ctx.finish();
  const auto j = nlohmann::json::parse(slurp(tmp.path / "run" / "manifest.json"));
  CHECK(j["command"] == "degrees");
  CHECK(j["config"]["m"] == 2);
  CHECK(j["rng"] == std::string(Rng::kAlgorithm));
  CHECK(j["artifact_version"] == cli::kArtifactVersion);
  REQUIRE(j["outputs"].size() == 1);
  CHECK(j["outputs"][0]["sha256"] == cli::sha256_hex("x\n1\n"));
  CHECK(j["outputs"][0]["bytes"] == 4);
  CHECK_THROWS_AS(cli::RunContext("x", {}, ""), ValidationError);
  CHECK_THROWS_AS(cli::RunContext("x", {}, "/proc/uagraph_not_writable"), ValidationError);
}

TEST_CASE("exit codes and validation") {
  Run r = run("generate --m 2 --d 4 --n 100 --out /tmp/unused_uagraph");
  CHECK(r.code == 1);
  CHECK(r.out.find("d = 2m") != std::string::npos);
  CHECK(run("degrees --m 2 --d 5 --bogus 3").code == 1);
  CHECK(run("degrees --m 2 --d 5 --config /nonexistent/uagraph.json --out /tmp/unused_uagraph").code == 1);
  CHECK(run("report --run /nonexistent/uagraph_run").code == 1);
}

TEST_CASE("fixed-point table") {
  const Run r = run("fixed-point --m 1 --d 3");
  REQUIRE(r.code == 0);
  const FixedPoint fp = solve_rho(1, 3);
  for (double x : fp.rho) CHECK(r.out.find(cli::num(x)) != std::string::npos);
}

TEST_CASE("degrees run, report and rerun from the manifest") {
  TempDir tmp;
  const fs::path a = tmp.path / "a", b = tmp.path / "b";
  REQUIRE(run("degrees --m 2 --d 5 --n 5000 --seeds 2 --out " + a.string()).code == 0);
  REQUIRE(run("degrees --config " + (a / "manifest.json").string() + " --out " + b.string()).code == 0);
  CHECK(slurp(a / "degrees.jsonl") == slurp(b / "degrees.jsonl"));
  CHECK(slurp(a / "degrees_summary.csv") == slurp(b / "degrees_summary.csv"));

  // every recorded digest matches the file
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  for (const auto& o : manifest["outputs"]) CHECK(cli::sha256_hex(slurp(a / o["file"].get<std::string>())) == o["sha256"]);
  CHECK(manifest["config"]["seeds"] == "2");

  const fs::path csv = tmp.path / "report.csv";
  REQUIRE(run("report --run " + a.string() + " --out " + csv.string()).code == 0);
  std::ifstream rep(csv), jl(a / "degrees.jsonl");
  std::string header, line;
  std::getline(rep, header);
  CHECK(header == "n,k,X_k,rho_k,abs_err");
  std::size_t rows = 0;
  while (std::getline(jl, line)) {
    const auto j = nlohmann::json::parse(line);
    std::string row;
    REQUIRE(std::getline(rep, row));
    const auto f = split(row);
    REQUIRE(f.size() == 5);
    CHECK(std::stoull(f[0]) == j["n"].get<std::uint64_t>());
    CHECK(std::stoi(f[1]) == j["k"].get<int>());
    CHECK(std::stod(f[2]) == j["X_k"].get<double>());
    ++rows;
  }
  CHECK(rows > 0);
  CHECK_FALSE(std::getline(rep, line));

  // flags override the config file
  const fs::path c = tmp.path / "c";
  REQUIRE(run("degrees --config " + (a / "manifest.json").string() + " --n 3000 --out " + c.string()).code == 0);
  CHECK(nlohmann::json::parse(slurp(c / "manifest.json"))["config"]["n"] == 3000);
}
