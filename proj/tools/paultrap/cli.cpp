#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "config.hpp"
#include "manifest.hpp"
#include "paultrap/constants.hpp"
#include "paultrap/dynamics.hpp"
#include "paultrap/fields.hpp"
#include "paultrap/launch.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/table.hpp"
#include "paultrap/transport.hpp"
#include "paultrap/units.hpp"

#ifndef PAULTRAP_VERSION
#define PAULTRAP_VERSION "0.0.0"
#endif

namespace paultrap::cli {

const char* tool_version() { return PAULTRAP_VERSION; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 2.0 * constants::pi;

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::string output;
  std::string manifest;
};

struct Context {
  const CommonOptions& common;
  const std::vector<std::string>& args;
  std::string subcommand;
  std::ostream& out;
  std::ostream& err;
};

ResolvedConfig load_config(const CommonOptions& common) {
  std::filesystem::path path = common.config;
  if (path.empty()) {
    const char* dir = std::getenv(kConfigDirEnv);
    if (dir == nullptr || *dir == '\0') {
      throw ConfigError("<none>", "", 1,
                        "no --config given and $" + std::string(kConfigDirEnv) + " is not set");
    }
    path = std::filesystem::path(dir) / "default.yaml";
  }
  return parse_config_file(resolve_config_path(path), common.sets);
}

double bool_value(bool b) { return b ? 1.0 : 0.0; }

double status_code(RunStatus s) {
  switch (s) {
    case RunStatus::Completed:
      return 0.0;
    case RunStatus::Escaped:
      return 1.0;
    case RunStatus::StepFailure:
      return 2.0;
  }
  return -1.0;
}

void add_standard_meta(io::Table& t, const Context& ctx, const ResolvedConfig& cfg) {
  t.add_meta("tool", std::string("paultrap ") + tool_version());
  t.add_meta("subcommand", ctx.subcommand);
  t.add_meta("config", cfg.source);
  t.add_meta("units", "SI");
}

/// Writes the table to --output (plus manifest) or to stdout.
void emit(const Context& ctx, const ResolvedConfig& cfg, const io::Table& table,
          const std::vector<std::pair<std::string, io::Table>>& extra = {}) {
  if (ctx.common.output.empty()) {
    io::write_table(ctx.out, table);
    for (const auto& [_, t] : extra) io::write_table(ctx.out, t);
    return;
  }
  RunManifest manifest;
  manifest.tool_version = tool_version();
  manifest.subcommand = ctx.subcommand;
  manifest.arguments = ctx.args;
  manifest.seed = cfg.simulation.seed;
  manifest.timestamp = utc_timestamp();
  manifest.resolved_config = cfg.to_json();

  io::write_table_file(ctx.common.output, table);
  manifest.outputs.push_back({ctx.common.output, sha256_file(ctx.common.output)});
  for (const auto& [suffix, t] : extra) {
    const std::string path = ctx.common.output + suffix;
    io::write_table_file(path, t);
    manifest.outputs.push_back({path, sha256_file(path)});
  }
  const std::string manifest_path =
      ctx.common.manifest.empty() ? ctx.common.output + ".manifest.json" : ctx.common.manifest;
  write_manifest(manifest_path, manifest);
}

std::vector<double> range_or(const std::string& text, Dimension dim, double fallback) {
  if (text.empty()) return {fallback};
  try {
    return parse_range(text, dim);
  } catch (const UnitError& e) {
    throw CLI::ValidationError("range '" + text + "'", e.what());
  }
}

// ---------------------------------------------------------------------------

struct LaunchOptions {
  std::string amplitude, frequency, radius;
};

int cmd_launch(const Context& ctx, const LaunchOptions& opt) {
  const ResolvedConfig cfg = load_config(ctx.common);
  const auto amplitudes = range_or(opt.amplitude, Dimension::Length, cfg.piezo.amplitude());
  const auto freqs = range_or(opt.frequency, Dimension::Frequency, cfg.piezo.omega() / kTwoPi);
  const auto radii = range_or(opt.radius, Dimension::Length, cfg.particle.radius());

  io::Table t;
  t.columns = {"amplitude_m",         "frequency_Hz",          "radius_m",     "vdw_force_N",
               "required_accel_m_s2", "available_accel_m_s2", "min_radius_m", "launchable"};
  add_standard_meta(t, ctx, cfg);
  t.add_meta("gamma_J_m2", io::format_number(cfg.surface.gamma()));
  t.add_meta("density_kg_m3", io::format_number(cfg.particle.density()));

  std::ostringstream text;
  text << std::setw(12) << "A [mm]" << std::setw(12) << "f [kHz]" << std::setw(12) << "r [nm]"
       << std::setw(14) << "F_vdw [N]" << std::setw(14) << "a_req" << std::setw(14) << "a_avail"
       << std::setw(12) << "r_min [nm]" << std::setw(12) << "launch" << '\n';
  for (double A : amplitudes) {
    for (double f : freqs) {
      for (double r : radii) {
        const PiezoDrive piezo = PiezoDrive::from_frequency(A, f);
        const Particle p = cfg.particle.with_radius(r);
        const LaunchAssessment a = assess_launch(p, cfg.surface, piezo);
        t.add_row({A, f, r, a.vdw_force, a.required_acceleration, a.available_acceleration,
                   a.min_radius, bool_value(a.launchable)});
        text << std::setprecision(4) << std::setw(12) << A * 1e3 << std::setw(12) << f * 1e-3
             << std::setw(12) << r * 1e9 << std::setw(14) << a.vdw_force << std::setw(14)
             << a.required_acceleration << std::setw(14) << a.available_acceleration
             << std::setw(12) << a.min_radius * 1e9 << std::setw(12)
             << (a.launchable ? "yes" : "no") << '\n';
      }
    }
  }
  ctx.out << text.str();
  if (!ctx.common.output.empty()) emit(ctx, cfg, t);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FieldOptions {
  std::string x, y, z;
  std::string time;
};

int cmd_field_sample(const Context& ctx, const FieldOptions& opt) {
  const ResolvedConfig cfg = load_config(ctx.common);
  const double R = cfg.drive.length_scale();
  const auto xs = opt.x.empty() ? parse_range("0:" + io::format_number(0.5 * R) + ":5", Dimension::Length)
                                : range_or(opt.x, Dimension::Length, 0.0);
  const auto ys = range_or(opt.y, Dimension::Length, 0.0);
  const auto zs = range_or(opt.z, Dimension::Length, 0.0);
  double t_eval = 0.0;
  if (!opt.time.empty()) {
    try {
      t_eval = parse_quantity(opt.time, Dimension::Dimensionless);
    } catch (const UnitError& e) {
      throw CLI::ValidationError("--time", e.what());
    }
  }

  io::Table t;
  t.columns = {"x_m",    "y_m",    "z_m",    "t_s",           "phi_V",       "Ex_V_m",
               "Ey_V_m", "Ez_V_m", "phi_p_J", "Fdep_x_N", "Fdep_y_N", "Fdep_z_N"};
  add_standard_meta(t, ctx, cfg);
  t.add_meta("topology", std::string(to_string(cfg.drive.topology())));
  for (double x : xs) {
    for (double y : ys) {
      for (double z : zs) {
        const Vec3 r{x, y, z};
        const FieldSample s = field_at(r, t_eval, cfg.drive);
        const double phi_p = ponderomotive_potential(r, cfg.particle, cfg.drive);
        const Vec3 f = dep_force(r, cfg.particle, cfg.environment, cfg.drive);
        t.add_row({x, y, z, t_eval, s.potential, s.field.x, s.field.y, s.field.z, phi_p, f.x, f.y,
                   f.z});
      }
    }
  }
  emit(ctx, cfg, t);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct StabilityOptions {
  std::string mode{"V-omega"};
  std::string voltage, frequency, charge_e;
};

int cmd_stability_map(const Context& ctx, const StabilityOptions& opt) {
  const ResolvedConfig cfg = load_config(ctx.common);
  if (cfg.drive.dc_voltage() != 0.0) {
    throw DomainError("stability-map evaluates the a = 0 criterion; set drive.U = 0");
  }
  const auto volts = range_or(opt.voltage, Dimension::Voltage, cfg.drive.rf_amplitude());
  std::vector<double> omegas;
  std::vector<double> charges;
  if (opt.mode == "V-omega") {
    for (double f : range_or(opt.frequency, Dimension::Frequency, cfg.drive.omega() / kTwoPi)) {
      omegas.push_back(kTwoPi * f);
    }
    charges = {cfg.particle.charge()};
  } else if (opt.mode == "Q-V") {
    omegas = {cfg.drive.omega()};
    if (opt.charge_e.empty()) {
      charges = {cfg.particle.charge()};
    } else {
      for (double n : range_or(opt.charge_e, Dimension::Dimensionless, 0.0)) {
        charges.push_back(elementary_charges(n));
      }
    }
  } else {
    throw CLI::ValidationError("--mode", "expected V-omega or Q-V");
  }

  io::Table t;
  t.columns = {"V_V",  "omega_rad_s", "Q_C",    "a_x",          "q_x",          "q_y",
               "q_z",  "stable",      "omega_x_rad_s", "omega_y_rad_s", "omega_z_rad_s"};
  add_standard_meta(t, ctx, cfg);
  t.add_meta("mode", opt.mode);
  t.add_meta("topology", std::string(to_string(cfg.drive.topology())));
  t.add_meta("stability_limit", io::format_number(kStabilityLimit));

  auto row = [&](double Q, double V, double omega) {
    const Particle p = cfg.particle.with_charge(Q);
    const TrapDrive drive = cfg.drive.with_rf_amplitude(V).with_omega(omega);
    const MathieuParams mp = mathieu_params(p, drive);
    const StabilityVerdict verdict = is_stable(mp);
    std::array<double, 3> w{kNaN, kNaN, kNaN};
    for (int i = 0; i < mp.axis_count(); ++i) {
      if (mp.a[i] + 0.5 * mp.q[i] * mp.q[i] > 0.0) w[i] = secular_frequency(mp, i);
    }
    if (mp.axis_count() == 2) w[2] = 0.0;
    t.add_row({V, omega, Q, mp.a[0], mp.q[0], mp.q[1], mp.q[2], bool_value(verdict.overall), w[0],
               w[1], w[2]});
  };
  if (opt.mode == "V-omega") {
    for (double V : volts)
      for (double omega : omegas) row(charges.front(), V, omega);
  } else {
    for (double Q : charges)
      for (double V : volts) row(Q, V, omegas.front());
  }
  emit(ctx, cfg, t);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Context& ctx) {
  const ResolvedConfig cfg = load_config(ctx.common);
  const MathieuParams mp = mathieu_params(cfg.particle, cfg.drive);
  double predicted = kNaN;
  if (mp.a[0] + 0.5 * mp.q[0] * mp.q[0] > 0.0) predicted = secular_frequency(mp, 0);

  State init{cfg.initial.position, cfg.initial.velocity};
  if (cfg.initial.thermal) {
    if (!(predicted > 0.0)) throw DomainError("thermal initial state needs a defined secular frequency");
    init = sample_thermal_state(cfg.particle, cfg.environment, predicted, cfg.simulation.seed);
  }
  const Trajectory traj = integrate(cfg.particle, cfg.drive, cfg.environment, init, cfg.simulation);

  double estimate = zero_crossing_frequency(traj.samples, 0);
  if (std::isnan(estimate)) estimate = zero_crossing_frequency(traj.samples, 1);

  io::Table t;
  t.columns = {"t_s", "x_m", "y_m", "z_m", "vx_m_s", "vy_m_s", "vz_m_s"};
  add_standard_meta(t, ctx, cfg);
  t.add_meta("status", std::string(to_string(traj.status())));
  t.add_meta("max_amplitude_m", io::format_number(traj.summary.max_radius));
  t.add_meta("secular_frequency_estimate_rad_s", io::format_number(estimate));
  t.add_meta("secular_frequency_predicted_rad_s", io::format_number(predicted));
  t.add_meta("q_x", io::format_number(mp.q[0]));
  t.add_meta("accepted_steps", std::to_string(traj.summary.accepted_steps));
  t.add_meta("rejected_steps", std::to_string(traj.summary.rejected_steps));
  t.add_meta("error_estimate_m", io::format_number(traj.summary.error_estimate));
  t.add_meta("seed", std::to_string(cfg.simulation.seed));
  for (const Sample& s : traj.samples) {
    t.add_row({s.t, s.position.x, s.position.y, s.position.z, s.velocity.x, s.velocity.y,
               s.velocity.z});
  }

  io::Table summary;
  summary.columns = {"status",       "max_amplitude_m", "omega_secular_estimate_rad_s",
                     "omega_secular_predicted_rad_s", "q_x", "t_end_s", "accepted_steps",
                     "error_estimate_m"};
  summary.add_meta("status", std::string(to_string(traj.status())));
  summary.add_meta("status_codes", "0=completed 1=escaped 2=step-failure");
  summary.add_row({status_code(traj.status()), traj.summary.max_radius, estimate, predicted, mp.q[0],
                   traj.summary.t_end, static_cast<double>(traj.summary.accepted_steps),
                   traj.summary.error_estimate});
  if (ctx.common.output.empty()) {
    io::write_table(ctx.out, t);
  } else {
    emit(ctx, cfg, t, {{".summary.csv", summary}});
    io::write_table(ctx.out, summary);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_bruteforce(const Context& ctx) {
  const ResolvedConfig cfg = load_config(ctx.common);
  SimConfig sim = cfg.simulation;
  sim.periods = cfg.bruteforce_periods;
  const QCriticalEstimate est = bruteforce_q_critical(cfg.particle, cfg.drive, sim, cfg.bruteforce);

  io::Table t;
  t.columns = {"q_low", "q_high", "V_low_V", "V_high_V", "bisections", "low_confidence", "periods"};
  add_standard_meta(t, ctx, cfg);
  t.add_meta("topology", std::string(to_string(cfg.drive.topology())));
  t.add_meta("reference_limit", io::format_number(kStabilityLimit));
  t.add_row({est.q_low, est.q_high, est.v_low, est.v_high, static_cast<double>(est.bisections),
             bool_value(est.low_confidence), sim.periods});
  emit(ctx, cfg, t);
  return kExitOk;
}

// ---------------------------------------------------------------------------

const std::vector<std::string> kTransitColumns = {
    "V_V", "omega_rad_s", "q", "omega_secular_rad_s", "r0_m", "clearance_ratio", "verdict"};

int cmd_transit(const Context& ctx) {
  const ResolvedConfig cfg = load_config(ctx.common);
  const TransitVerdict v =
      transit_feasibility(cfg.particle, cfg.environment, cfg.drive, cfg.geometry, cfg.margin);
  io::Table t;
  t.columns = kTransitColumns;
  add_standard_meta(t, ctx, cfg);
  t.add_meta("tube_diameter_m", io::format_number(cfg.geometry.tube_diameter()));
  t.add_meta("margin_policy", std::string(to_string(v.margin.policy)));
  t.add_meta("margin_factor", io::format_number(v.margin.factor));
  t.add_row({cfg.drive.rf_amplitude(), cfg.drive.omega(), v.q, v.omega_secular, v.r0,
             v.clearance_ratio, bool_value(v.passes)});
  emit(ctx, cfg, t);
  return kExitOk;
}

struct DesignOptions {
  std::string voltage, frequency;
};

int cmd_design_search(const Context& ctx, const DesignOptions& opt) {
  const ResolvedConfig cfg = load_config(ctx.common);
  SweepSpec spec;
  spec.topology = cfg.drive.topology();
  spec.length_scale = cfg.drive.length_scale();
  spec.dc_voltage = cfg.drive.dc_voltage();
  spec.margin = cfg.margin;
  spec.rf_amplitudes = range_or(opt.voltage, Dimension::Voltage, cfg.drive.rf_amplitude());
  for (double f : range_or(opt.frequency, Dimension::Frequency, cfg.drive.omega() / kTwoPi)) {
    spec.drive_omegas.push_back(kTwoPi * f);
  }
  const OperatingWindow win = operating_window(cfg.particle, cfg.environment, cfg.geometry, spec);

  io::Table t;
  t.columns = kTransitColumns;
  t.columns.insert(t.columns.end(), {"stable", "passes", "score"});
  add_standard_meta(t, ctx, cfg);
  t.add_meta("tube_diameter_m", io::format_number(cfg.geometry.tube_diameter()));
  t.add_meta("margin_policy", std::string(to_string(cfg.margin.policy)));
  t.add_meta("margin_factor", io::format_number(cfg.margin.factor));
  t.add_meta("feasible_points", std::to_string(win.feasible.size()));
  if (win.optimum) {
    const WindowPoint& best = win.grid[*win.optimum];
    t.add_meta("optimum_index", std::to_string(*win.optimum));
    t.add_meta("optimum_V_V", io::format_number(best.rf_amplitude));
    t.add_meta("optimum_omega_rad_s", io::format_number(best.drive_omega));
    t.add_meta("optimum_score", io::format_number(best.score));
  } else {
    t.add_meta("optimum_index", "none");
  }
  for (const WindowPoint& pt : win.grid) {
    t.add_row({pt.rf_amplitude, pt.drive_omega, pt.q, pt.omega_secular, pt.r0, pt.clearance_ratio,
               bool_value(pt.feasible), bool_value(pt.stable), bool_value(pt.passes),
               pt.feasible ? pt.score : kNaN});
  }
  emit(ctx, cfg, t);
  if (!ctx.common.output.empty()) {
    if (win.optimum) {
      const WindowPoint& best = win.grid[*win.optimum];
      ctx.out << "optimum: V = " << best.rf_amplitude << " V, f = " << best.drive_omega / kTwoPi
              << " Hz, q = " << best.q << ", clearance = " << best.clearance_ratio << '\n';
    } else {
      ctx.out << "no feasible point\n";
    }
  }
  return kExitOk;
}

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("-c,--config", common.config, "YAML run configuration");
  sub->add_option("--set", common.sets, "Override a config key: section.key=value (repeatable)");
  sub->add_option("-o,--output", common.output, "Output file (default: stdout)");
  sub->add_option("--manifest", common.manifest, "Manifest path (default: <output>.manifest.json)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Charged-nanoparticle RF trap and guide design tool", "paultrap"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  CommonOptions common;
  LaunchOptions launch;
  FieldOptions field;
  StabilityOptions stab;
  DesignOptions design;

  auto* launch_cmd = app.add_subcommand("launch-feasibility", "Piezo detachment over an (A, f, r) grid");
  add_common(launch_cmd, common);
  launch_cmd->add_option("--amplitude", launch.amplitude, "Piezo amplitude range, e.g. 0.1mm:2mm:20");
  launch_cmd->add_option("--frequency", launch.frequency, "Piezo frequency range, e.g. 300kHz");
  launch_cmd->add_option("--radius", launch.radius, "Particle radius range, e.g. 25nm:100nm:4");

  auto* field_cmd = app.add_subcommand("field-sample", "Potential, field, ponderomotive and DEP terms on a grid");
  add_common(field_cmd, common);
  field_cmd->add_option("--x", field.x, "x range (default 0:R/2:5)");
  field_cmd->add_option("--y", field.y, "y range (default 0)");
  field_cmd->add_option("--z", field.z, "z range (default 0)");
  field_cmd->add_option("--time", field.time, "Evaluation time in seconds (default 0)");

  auto* stab_cmd = app.add_subcommand("stability-map", "Mathieu q, verdict and secular frequency over a grid");
  add_common(stab_cmd, common);
  stab_cmd->add_option("--mode", stab.mode, "V-omega or Q-V")->capture_default_str();
  stab_cmd->add_option("--voltage", stab.voltage, "RF amplitude range, e.g. 50V:500V:10");
  stab_cmd->add_option("--frequency", stab.frequency, "Drive frequency range (V-omega mode)");
  stab_cmd->add_option("--charge-e", stab.charge_e, "Charge range in elementary charges (Q-V mode)");

  auto* sim_cmd = app.add_subcommand("simulate", "Integrate one trajectory");
  add_common(sim_cmd, common);

  auto* brute_cmd = app.add_subcommand("bruteforce-stability", "Bisect the a = 0 stability edge by direct integration");
  add_common(brute_cmd, common);

  auto* transit_cmd = app.add_subcommand("transit-check", "Thermal amplitude against the pumping tube bore");
  add_common(transit_cmd, common);

  auto* design_cmd = app.add_subcommand("design-search", "Search (V, f) for stable drives that clear the tube");
  add_common(design_cmd, common);
  design_cmd->add_option("--voltage", design.voltage, "RF amplitude range");
  design_cmd->add_option("--frequency", design.frequency, "Drive frequency range");

  std::vector<const char*> argv{"paultrap"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    if (!args.empty() && !args.front().starts_with("-") && app.get_subcommand_no_throw(args.front()) == nullptr) {
      what = "unknown subcommand '" + args.front() + "'";
    }
    err << "error: " << what << "\n\n" << app.help();
    return kExitUsageError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const Context ctx{common, args, chosen->get_name(), out, err};
  try {
    if (chosen == launch_cmd) return cmd_launch(ctx, launch);
    if (chosen == field_cmd) return cmd_field_sample(ctx, field);
    if (chosen == stab_cmd) return cmd_stability_map(ctx, stab);
    if (chosen == sim_cmd) return cmd_simulate(ctx);
    if (chosen == brute_cmd) return cmd_bruteforce(ctx);
    if (chosen == transit_cmd) return cmd_transit(ctx);
    if (chosen == design_cmd) return cmd_design_search(ctx, design);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const InvalidParameter& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace paultrap::cli
