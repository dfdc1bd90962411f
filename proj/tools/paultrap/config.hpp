#pragma once

// Run configuration: one YAML document with the sections
//   particle, drive, environment, piezo, surface, guide, simulation, bruteforce.
// Every key and its default is listed in README.md. Values are either bare
// numbers (SI, or the unit named by a key suffix such as `diameter_nm`) or
// strings with a unit ("75 nm", "200 Hz").

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paultrap/dynamics.hpp"
#include "paultrap/error.hpp"
#include "paultrap/model.hpp"
#include "paultrap/transport.hpp"
#include "paultrap/vec3.hpp"

namespace paultrap::cli {

inline constexpr const char* kConfigDirEnv = "PAULTRAP_CONFIG_DIR";

class ConfigError : public Error {
 public:
  /// line <= 0 marks a value that came from a command-line override.
  ConfigError(std::string source, std::string key_path, int line, const std::string& message);

  const std::string& key_path() const { return key_path_; }
  int line() const { return line_; }

 private:
  std::string key_path_;
  int line_;
};

struct InitialCondition {
  bool thermal{false};
  Vec3 position{1e-5, 0.0, 0.0};
  Vec3 velocity{};
};

struct ResolvedConfig {
  std::string source;
  Particle particle{1e-7, 1.0};
  TrapDrive drive{Topology::Guide2D, 2.35e-3, 0.0, 250.0, 1.0};
  Environment environment;
  PiezoDrive piezo{1e-3, 1.0};
  SurfaceContact surface;
  GuideGeometry geometry;
  Margin margin;
  SimConfig simulation;
  InitialCondition initial;
  BruteforceOptions bruteforce;
  double bruteforce_periods{300.0};

  std::vector<std::string> defaulted;  // key paths filled from defaults
  std::vector<std::string> overrides;  // "key.path=value" as given

  /// Every resolved value in SI, plus the defaulted and override lists.
  nlohmann::json to_json() const;
};

/// `overrides` are "section.key=value" strings applied on top of the file.
ResolvedConfig parse_config_text(std::string_view text, const std::string& source,
                                 const std::vector<std::string>& overrides = {});
ResolvedConfig parse_config_file(const std::filesystem::path& path,
                                 const std::vector<std::string>& overrides = {});

/// A path that does not exist as given is looked up in $PAULTRAP_CONFIG_DIR.
std::filesystem::path resolve_config_path(const std::filesystem::path& path);

}  // namespace paultrap::cli
