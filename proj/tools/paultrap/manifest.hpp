#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace paultrap::cli {

struct OutputDigest {
  std::string path;
  std::string sha256;
};

/// Written next to every numeric output file as `<output>.manifest.json`.
struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::vector<std::string> arguments;
  std::uint64_t seed{0};
  std::string timestamp;  // UTC, ISO 8601
  nlohmann::json resolved_config;
  std::vector<OutputDigest> outputs;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);
std::string utc_timestamp();

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace paultrap::cli
