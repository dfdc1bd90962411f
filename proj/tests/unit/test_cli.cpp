#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "paultrap/constants.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/table.hpp"
#include "paultrap/error.hpp"

#include "paultrap/cli.hpp"
#include "paultrap/config.hpp"
#include "paultrap/manifest.hpp"

namespace fs = std::filesystem;
using namespace paultrap;
using namespace paultrap::cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("paultrap_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kMinimal = "particle:\n  radius: 50 nm\n  density: 3500\n";

const char* kDesign = R"(particle:
  diameter_nm: 75
  density: 3500 kg/m^3
  charge_e: 1
drive:
  topology: guide
  R: 2.35 mm
  V: 250 V
  frequency: 1541.6 Hz
environment:
  temperature: 300 K
simulation:
  periods: 200
  initial_position: [10 um, 0, 0]
)";

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("minimal config takes every default") {
  const ResolvedConfig cfg = parse_config_text(kMinimal, "mem");
  CHECK(cfg.particle.radius() == doctest::Approx(50e-9));
  CHECK(cfg.particle.charge() == 0.0);
  CHECK(cfg.drive.topology() == Topology::Guide2D);
  CHECK(cfg.drive.rf_amplitude() == 250.0);
  CHECK(cfg.drive.omega() == doctest::Approx(2.0 * constants::pi * 200.0));
  CHECK(cfg.environment.temperature() == 300.0);
  CHECK(cfg.geometry.tube_diameter() == 1.5e-3);
  CHECK(cfg.surface.gamma() == 10e-3);
  CHECK(cfg.simulation.dt_max_fraction == 1.0 / 200.0);
  CHECK(cfg.bruteforce_periods == 300.0);
  for (const char* key : {"particle.charge", "drive.V", "drive.frequency", "environment.temperature",
                          "guide.tube_diameter", "guide.margin", "simulation.periods",
                          "simulation.seed", "bruteforce.periods", "piezo.amplitude", "surface.gamma"}) {
    CAPTURE(key);
    CHECK(contains(cfg.defaulted, key));
  }
  CHECK_FALSE(contains(cfg.defaulted, "particle.density"));
  const auto j = cfg.to_json();
  CHECK(j["particle"]["radius_m"].get<double>() == doctest::Approx(50e-9));
  CHECK(j["defaulted"].size() == cfg.defaulted.size());
}

TEST_CASE("diameter keys halve into a radius") {
  const auto cfg = parse_config_text("particle:\n  diameter_nm: 75\n  density: 3500\n", "mem");
  CHECK(cfg.particle.radius() == doctest::Approx(37.5e-9).epsilon(1e-14));
  const auto cfg2 = parse_config_text("particle:\n  diameter: 75 nm\n  density: 3500\n", "mem");
  CHECK(cfg2.particle.radius() == doctest::Approx(37.5e-9).epsilon(1e-14));
}

TEST_CASE("config errors carry key path and line") {
  auto err_of = [](const std::string& text) -> ConfigError {
    try {
      parse_config_text(text, "cfg.yaml");
    } catch (const ConfigError& e) {
      return e;
    }
    FAIL("no error raised");
    return ConfigError("", "", 0, "");
  };
  {
    const ConfigError e = err_of("particle:\n  density: 3500\n  radius: 75 parsec\n");
    CHECK(e.key_path() == "particle.radius");
    CHECK(e.line() == 3);
    const std::string msg = e.what();
    CHECK(msg.find("cfg.yaml:3") != std::string::npos);
    CHECK(msg.find("parsec") != std::string::npos);
  }
  {
    const ConfigError e = err_of("particle:\n  radius: 5 nm\n  density: 3500\n  colour: red\n");
    CHECK(e.key_path() == "particle.colour");
    CHECK(e.line() == 4);
  }
  {
    const ConfigError e = err_of("particle:\n  radius: 5 nm\n  density: 3500\nlaser:\n  power: 1\n");
    CHECK(e.key_path() == "laser");
    CHECK(e.line() == 4);
  }
  {
    const ConfigError e = err_of("particle:\n  radius: 5 nm\n");
    CHECK(e.key_path() == "particle.density");
  }
  {
    const ConfigError e = err_of("particle:\n  radius: 5 nm\n  diameter: 10 nm\n  density: 1\n");
    CHECK(e.key_path() == "particle.diameter");
  }
  {
    const ConfigError e = err_of(std::string(kMinimal) + "simulation:\n  dt_max_fraction: 0.1\n");
    CHECK(e.key_path() == "simulation");
  }
  {
    const ConfigError e = err_of(std::string(kMinimal) + "guide:\n  tube_diameter: 3 mm\n");
    CHECK(e.key_path() == "guide");
  }
  {
    const ConfigError e = err_of("particle: [1, 2\n");
    CHECK(e.line() >= 1);
  }
}

TEST_CASE("command-line overrides win") {
  const auto cfg = parse_config_text(kDesign, "mem", {"drive.V=100 V", "simulation.seed=7"});
  CHECK(cfg.drive.rf_amplitude() == 100.0);
  CHECK(cfg.simulation.seed == 7u);
  CHECK(cfg.overrides.size() == 2);
  try {
    parse_config_text(kDesign, "mem", {"drive.V=12 parsec"});
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "drive.V");
    CHECK(e.line() == 0);
  }
  CHECK_THROWS_AS(parse_config_text(kDesign, "mem", {"nodot=1"}), ConfigError);
}

TEST_CASE("config directory lookup") {
  TempDir dir;
  dir.write("design.yaml", kDesign);
  ::setenv(kConfigDirEnv, dir.path.c_str(), 1);
  CHECK(resolve_config_path("design.yaml") == dir.path / "design.yaml");
  CHECK(resolve_config_path("absent.yaml") == fs::path("absent.yaml"));
  const Result r = run_cli({"transit-check", "-c", "design.yaml"});
  CHECK(r.code == 0);
  ::unsetenv(kConfigDirEnv);
}

TEST_CASE("usage errors exit 2") {
  const Result unknown = run_cli({"teleport"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(unknown.err.find("unknown subcommand 'teleport'") != std::string::npos);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"simulate", "--bogus"}).code == 2);
  TempDir dir;
  const std::string bad = dir.write("bad.yaml", "particle:\n  radius: 75 parsec\n  density: 1\n");
  const Result r = run_cli({"simulate", "-c", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("particle.radius") != std::string::npos);
  CHECK(run_cli({"simulate", "-c", dir.file("missing.yaml")}).code == 2);
}

TEST_CASE("domain errors exit 1") {
  TempDir dir;
  // The literal 250 V / 200 Hz drive is far outside the stable region.
  const std::string cfg = dir.write("c.yaml", std::string(kDesign) + "");
  const Result r = run_cli({"transit-check", "-c", cfg, "--set", "drive.frequency=200 Hz"});
  CHECK(r.code == 1);
  CHECK(r.err.find("no confined transit") != std::string::npos);
}

TEST_CASE("stability-map emits one record per grid point with a manifest") {
  TempDir dir;
  const std::string cfg = dir.write("c.yaml", kDesign);
  const std::string out = dir.file("map.csv");
  const Result r = run_cli({"stability-map", "-c", cfg, "--voltage", "10V:500V:10", "--frequency",
                            "500Hz:5kHz:10", "-o", out});
  REQUIRE(r.code == 0);
  const io::Table t = io::read_table_file(out);
  CHECK(t.rows.size() == 100);
  CHECK(t.meta("subcommand") == "stability-map");
  const auto m = read_manifest(out + ".manifest.json");
  CHECK(m.subcommand == "stability-map");
  REQUIRE(m.outputs.size() == 1);
  CHECK(m.outputs[0].sha256 == sha256_file(out));
  CHECK(m.resolved_config["drive"]["V_V"].get<double>() == 250.0);
  CHECK(m.tool_version == tool_version());

  // Each record agrees with the library directly.
  const auto resolved = parse_config_file(cfg);
  const std::size_t iq = t.column("q_x"), iv = t.column("V_V"), iw = t.column("omega_rad_s"),
                    is = t.column("stable");
  for (const auto& row : t.rows) {
    const auto mp = mathieu_params(resolved.particle,
                                   resolved.drive.with_rf_amplitude(row[iv]).with_omega(row[iw]));
    CHECK(row[iq] == mp.q[0]);
    CHECK(row[is] == (is_stable(mp).overall ? 1.0 : 0.0));
  }
}

TEST_CASE("simulate recovers the secular frequency") {
  TempDir dir;
  const std::string cfg = dir.write("c.yaml", kDesign);
  const std::string out = dir.file("traj.csv");
  const Result r = run_cli({"simulate", "-c", cfg, "-o", out});
  REQUIRE(r.code == 0);
  const io::Table t = io::read_table_file(out);
  CHECK(t.meta("status") == "completed");
  CHECK(t.columns == std::vector<std::string>{"t_s", "x_m", "y_m", "z_m", "vx_m_s", "vy_m_s", "vz_m_s"});
  const double est = std::stod(t.meta("secular_frequency_estimate_rad_s"));
  const auto resolved = parse_config_file(cfg);
  const double predicted = secular_frequency(mathieu_params(resolved.particle, resolved.drive), 0);
  CHECK(std::abs(est / predicted - 1.0) < 0.02);

  const io::Table summary = io::read_table_file(out + ".summary.csv");
  REQUIRE(summary.rows.size() == 1);
  CHECK(summary.rows[0][summary.column("status")] == 0.0);
  const auto m = read_manifest(out + ".manifest.json");
  CHECK(m.outputs.size() == 2);
}

TEST_CASE("identical inputs give identical digests") {
  TempDir dir;
  const std::string cfg =
      dir.write("c.yaml", std::string(kDesign) + "  thermal_init: true\n  seed: 42\n");
  std::vector<std::string> digests;
  for (int i = 0; i < 2; ++i) {
    const std::string out = dir.file("run" + std::to_string(i) + ".csv");
    REQUIRE(run_cli({"simulate", "-c", cfg, "--set", "simulation.periods=20", "-o", out}).code == 0);
    digests.push_back(read_manifest(out + ".manifest.json").outputs[0].sha256);
  }
  CHECK(digests[0] == digests[1]);
  const std::string other = dir.file("other.csv");
  REQUIRE(run_cli({"simulate", "-c", cfg, "--set", "simulation.periods=20", "--set",
                   "simulation.seed=43", "-o", other})
              .code == 0);
  CHECK(read_manifest(other + ".manifest.json").outputs[0].sha256 != digests[0]);
}

TEST_CASE("every subcommand writes readable output") {
  TempDir dir;
  const std::string cfg = dir.write("c.yaml", kDesign);
  const std::vector<std::vector<std::string>> commands = {
      {"launch-feasibility", "--radius", "25nm:100nm:4", "--amplitude", "0.5mm,1mm"},
      {"field-sample", "--x", "0:1mm:3", "--y", "0,0.1mm"},
      {"stability-map", "--mode", "Q-V", "--charge-e", "1:5:5", "--voltage", "100V:300V:3"},
      {"bruteforce-stability", "--set", "bruteforce.periods=20"},
      {"transit-check"},
      {"design-search", "--voltage", "50V:400V:8", "--frequency", "500Hz:3kHz:6"},
  };
  const std::vector<std::size_t> expected_rows = {8, 6, 15, 1, 1, 48};
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::string> args = commands[i];
    const std::string out = dir.file("o" + std::to_string(i) + ".csv");
    args.insert(args.begin() + 1, {"-c", cfg, "-o", out});
    const Result r = run_cli(args);
    CAPTURE(commands[i][0]);
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    const io::Table t = io::read_table_file(out);
    CHECK(t.rows.size() == expected_rows[i]);
    CHECK(fs::exists(out + ".manifest.json"));
    const auto m = read_manifest(out + ".manifest.json");
    CHECK(m.outputs[0].sha256 == sha256_file(out));
  }
}

TEST_CASE("stdout output is parseable") {
  TempDir dir;
  const std::string cfg = dir.write("c.yaml", kDesign);
  const Result r = run_cli({"transit-check", "-c", cfg});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const io::Table t = io::read_table(in);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][t.column("verdict")] == 1.0);
}

TEST_CASE("manifest round trip") {
  RunManifest m;
  m.tool_version = "1.2.3";
  m.subcommand = "simulate";
  m.arguments = {"simulate", "-c", "x.yaml"};
  m.seed = 99;
  m.timestamp = utc_timestamp();
  m.resolved_config = {{"a", 1.5}};
  m.outputs = {{"x.csv", sha256_hex("abc")}};
  const auto back = RunManifest::from_json(m.to_json());
  CHECK(back.to_json() == m.to_json());
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(m.timestamp.size() == 20);
  CHECK(m.timestamp.back() == 'Z');
}
