#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>

namespace sidebp::cli {

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  j["tool_version"] = tool_version;
  j["wall_time_seconds"] = wall_time_seconds;
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : outputs) j["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}});
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.parameters = j.at("parameters");
  if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  for (const auto& o : j.at("outputs")) {
    m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>()});
  }
  return m;
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

bool verify_outputs(const RunManifest& manifest, const std::filesystem::path& base_dir) {
  for (const auto& o : manifest.outputs) {
    if (o.path == "-") continue;
    std::filesystem::path p(o.path);
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p) || sha256_file(p) != o.sha256) return false;
  }
  return true;
}

}  // namespace sidebp::cli
