#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sidebp::cli {

struct OutputDigest {
  std::string path;    ///< "-" for standard output
  std::string sha256;  ///< lowercase hex
  bool operator==(const OutputDigest&) const = default;
};

/// Record of one CLI invocation: enough to rerun it and to check that the
/// files on disk are the ones it produced.
struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::string tool_version;
  double wall_time_seconds = 0.0;
  std::vector<OutputDigest> outputs;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  bool operator==(const RunManifest&) const = default;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Recomputes every file digest (skipping "-") and compares.
bool verify_outputs(const RunManifest& manifest, const std::filesystem::path& base_dir);

}  // namespace sidebp::cli
