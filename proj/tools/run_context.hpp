#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace uagraph::cli {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// 17 significant digits; round-trips every double.
std::string num(double x);

/// "5" is a count (seeds 1..5); "3,8,13" or "7," is an explicit list.
std::vector<std::uint64_t> parse_seeds(const std::string& spec);

/// 1024, 2048, ... below n, then n itself.
std::vector<std::uint64_t> checkpoint_grid(std::uint64_t n, std::uint64_t start = 1024);

/// Output directory plus the manifest written when the run finishes.
class RunContext {
 public:
  RunContext(std::string command, nlohmann::json config, const std::string& out_dir);

  const nlohmann::json& config() const { return config_; }
  const std::filesystem::path& dir() const { return dir_; }

  /// Writes a data file and records its digest.
  void write(const std::string& name, const std::string& content);
  void finish();

 private:
  std::string command_;
  nlohmann::json config_;
  std::filesystem::path dir_;
  std::string started_;
  nlohmann::json outputs_ = nlohmann::json::array();
};

std::string sha256_hex(const std::string& data);
std::string utc_timestamp();

}  // namespace uagraph::cli
