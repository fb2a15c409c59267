#include "run_context.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "uagraph/error.hpp"
#include "uagraph/rng.hpp"

namespace uagraph::cli {

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  auto parse_one = [&](const std::string& tok) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (tok.empty() || pos != tok.size() || tok[0] == '-')
      throw ValidationError(fmt::format("bad seed '{}' in --seeds {}", tok, spec));
    return v;
  };
  std::vector<std::uint64_t> out;
  if (spec.find(',') == std::string::npos) {
    const std::uint64_t count = parse_one(spec);
    if (count == 0) throw ValidationError("--seeds count must be positive");
    for (std::uint64_t s = 1; s <= count; ++s) out.push_back(s);
    return out;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(parse_one(tok));
  if (out.empty()) throw ValidationError("--seeds list is empty");
  return out;
}

std::vector<std::uint64_t> checkpoint_grid(std::uint64_t n, std::uint64_t start) {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t x = start; x < n; x *= 2) grid.push_back(x);
  grid.push_back(n);
  return grid;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunContext::RunContext(std::string command, nlohmann::json config, const std::string& out_dir)
    : command_(std::move(command)), config_(std::move(config)), dir_(out_dir), started_(utc_timestamp()) {
  if (out_dir.empty()) throw ValidationError("--out <dir> is required");
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  const auto probe = dir_ / ".write_probe";
  std::ofstream test(probe);
  if (ec || !test) throw ValidationError(fmt::format("output directory {} is not writable", out_dir));
  test.close();
  std::filesystem::remove(probe, ec);
}

void RunContext::write(const std::string& name, const std::string& content) {
  std::ofstream out(dir_ / name, std::ios::binary);
  out << content;
  if (!out) throw ValidationError(fmt::format("cannot write {}", (dir_ / name).string()));
  outputs_.push_back({{"file", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
}

void RunContext::finish() {
  nlohmann::json manifest = {
      {"command", command_},
      {"config", config_},
      {"rng", std::string(Rng::kAlgorithm)},
      {"artifact_version", kArtifactVersion},
      {"started_at", started_},
      {"finished_at", utc_timestamp()},
      {"outputs", outputs_},
  };
  std::ofstream out(dir_ / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw ValidationError("cannot write manifest.json");
}

}  // namespace uagraph::cli
