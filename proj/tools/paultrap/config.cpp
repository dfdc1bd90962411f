#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "paultrap/constants.hpp"
#include "paultrap/units.hpp"

namespace paultrap::cli {

namespace {

std::string format_location(const std::string& source, int line) {
  if (line <= 0) return source + ": (command-line override)";
  return source + ":" + std::to_string(line);
}

}  // namespace

ConfigError::ConfigError(std::string source, std::string key_path, int line,
                         const std::string& message)
    : Error(format_location(source, line) + ": " + (key_path.empty() ? "" : key_path + ": ") +
            message),
      key_path_(std::move(key_path)),
      line_(line) {}

namespace {

struct Context {
  std::string source;
  std::set<std::string> override_keys;
  std::vector<std::string> defaulted;
};

int line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.line < 0 ? 0 : mark.line + 1;
}

class Section {
 public:
  Section(const YAML::Node& root, std::string name, Context& ctx)
      : name_(std::move(name)), ctx_(ctx) {
    if (root[name_]) {
      node_ = root[name_];
      line_ = line_of(node_);
      if (!node_.IsMap() && !node_.IsNull()) fail_section("section must be a mapping");
    }
  }

  bool has(const std::string& key) {
    queried_.insert(key);
    return node_.IsMap() && node_[key];
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(ctx_.source, name_ + "." + key, key_line(key), msg);
  }
  [[noreturn]] void fail_section(const std::string& msg) const {
    throw ConfigError(ctx_.source, name_, line_, msg);
  }

  std::string scalar(const std::string& key) {
    const YAML::Node v = value(key);
    if (!v.IsScalar()) fail(key, "expected a scalar value");
    return v.Scalar();
  }

  double quantity(const std::string& key, Dimension dim, double bare_scale = 1.0) {
    const std::string text = scalar(key);
    try {
      return parse_quantity(text, dim, bare_scale);
    } catch (const UnitError& e) {
      fail(key, e.what());
    }
  }

  double quantity_or(const std::string& key, Dimension dim, double fallback,
                     double bare_scale = 1.0) {
    if (!has(key)) {
      note_default(key);
      return fallback;
    }
    return quantity(key, dim, bare_scale);
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) {
      note_default(key);
      return fallback;
    }
    const std::string text = scalar(key);
    bool out = false;
    if (!YAML::convert<bool>::decode(value(key), out)) fail(key, "'" + text + "' is not a boolean");
    return out;
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    if (!has(key)) {
      note_default(key);
      return fallback;
    }
    return scalar(key);
  }

  long long integer_or(const std::string& key, long long fallback) {
    if (!has(key)) {
      note_default(key);
      return fallback;
    }
    const std::string text = scalar(key);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) fail(key, "'" + text + "' is not an integer");
    return v;
  }

  Vec3 vector_or(const std::string& key, Dimension dim, const Vec3& fallback) {
    if (!has(key)) {
      note_default(key);
      return fallback;
    }
    const YAML::Node v = value(key);
    if (!v.IsSequence() || v.size() != 3) fail(key, "expected a list of three values");
    Vec3 out;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!v[i].IsScalar()) fail(key, "expected a list of three values");
      try {
        out[i] = parse_quantity(v[i].Scalar(), dim);
      } catch (const UnitError& e) {
        fail(key, e.what());
      }
    }
    return out;
  }

  std::vector<std::string> list_or(const std::string& key, const std::vector<std::string>& fallback) {
    if (!has(key)) {
      note_default(key);
      return fallback;
    }
    const YAML::Node v = value(key);
    std::vector<std::string> out;
    if (v.IsSequence()) {
      for (const auto& item : v) {
        if (!item.IsScalar()) fail(key, "expected a list of names");
        out.push_back(item.Scalar());
      }
    } else if (v.IsScalar()) {
      std::stringstream ss(v.Scalar());
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
      }
    } else {
      fail(key, "expected a list of names");
    }
    return out;
  }

  /// Exactly-one-of lookup; returns the key found or empty if none.
  std::string one_of(std::initializer_list<std::string> keys) {
    std::string found;
    for (const auto& k : keys) {
      if (has(k)) {
        if (!found.empty()) fail(k, "conflicts with '" + found + "'");
        found = k;
      }
    }
    return found;
  }

  void note_default(const std::string& key) { ctx_.defaulted.push_back(name_ + "." + key); }

  void finish() const {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.Scalar();
      if (!queried_.contains(key)) {
        const int line = ctx_.override_keys.contains(name_ + "." + key) ? 0 : line_of(kv.first);
        throw ConfigError(ctx_.source, name_ + "." + key, line, "unknown key");
      }
    }
  }

  int line() const { return line_; }
  const std::string& name() const { return name_; }

 private:
  YAML::Node value(const std::string& key) const { return node_[key]; }

  int key_line(const std::string& key) const {
    if (ctx_.override_keys.contains(name_ + "." + key)) return 0;
    if (node_.IsMap()) {
      for (const auto& kv : node_) {
        if (kv.first.Scalar() == key) return line_of(kv.first);
      }
    }
    return line_;
  }

  std::string name_;
  Context& ctx_;
  YAML::Node node_;
  int line_{1};
  std::set<std::string> queried_;
};

template <typename F>
auto construct(const Section& section, F&& make) {
  try {
    return make();
  } catch (const InvalidParameter& e) {
    section.fail_section(e.what());
  }
}

void apply_override(YAML::Node& root, const std::string& spec, Context& ctx) {
  const auto eq = spec.find('=');
  const auto dot = spec.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError(ctx.source, spec, 0, "override must look like section.key=value");
  }
  const std::string section = spec.substr(0, dot);
  const std::string key = spec.substr(dot + 1, eq - dot - 1);
  const std::string value = spec.substr(eq + 1);
  if (section.empty() || key.empty()) {
    throw ConfigError(ctx.source, spec, 0, "override must look like section.key=value");
  }
  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError(ctx.source, section + "." + key, 0, e.msg);
  }
  if (!root[section] || root[section].IsNull()) root[section] = YAML::Node(YAML::NodeType::Map);
  root[section][key] = parsed.IsNull() ? YAML::Node(value) : parsed;
  ctx.override_keys.insert(section + "." + key);
}

const std::set<std::string>& known_sections() {
  static const std::set<std::string> s{"particle", "drive",      "environment", "piezo",
                                       "surface",  "guide", "simulation",  "bruteforce"};
  return s;
}

}  // namespace

ResolvedConfig parse_config_text(std::string_view text, const std::string& source,
                                 const std::vector<std::string>& overrides) {
  Context ctx;
  ctx.source = source;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, "", e.mark.line + 1, e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError(source, "", 1, "top level must be a mapping of sections");
  for (const auto& spec : overrides) apply_override(root, spec, ctx);
  for (const auto& kv : root) {
    const std::string name = kv.first.Scalar();
    if (!known_sections().contains(name)) {
      throw ConfigError(source, name, line_of(kv.first), "unknown section");
    }
  }

  ResolvedConfig cfg;
  cfg.source = source;
  cfg.overrides = overrides;

  {
    Section s(root, "particle", ctx);
    const std::string size_key = s.one_of({"radius", "radius_nm", "diameter", "diameter_nm"});
    if (size_key.empty()) {
      throw ConfigError(source, "particle.radius", s.line(),
                        "missing required key (one of radius, radius_nm, diameter, diameter_nm)");
    }
    double radius = 0.0;
    if (size_key == "radius") radius = s.quantity("radius", Dimension::Length);
    if (size_key == "radius_nm") radius = s.quantity("radius_nm", Dimension::Length, 1e-9);
    if (size_key == "diameter") radius = 0.5 * s.quantity("diameter", Dimension::Length);
    if (size_key == "diameter_nm") radius = 0.5 * s.quantity("diameter_nm", Dimension::Length, 1e-9);
    if (!s.has("density")) {
      throw ConfigError(source, "particle.density", s.line(), "missing required key");
    }
    const double density = s.quantity("density", Dimension::Density);
    const std::string charge_key = s.one_of({"charge", "charge_e"});
    double charge = 0.0;
    if (charge_key == "charge") charge = s.quantity("charge", Dimension::Charge);
    if (charge_key == "charge_e") {
      charge = s.quantity("charge_e", Dimension::Dimensionless, constants::elementary_charge);
    }
    if (charge_key.empty()) s.note_default("charge");
    const double eps = s.quantity_or("rel_permittivity", Dimension::Dimensionless, 5.7);
    const double sigma = s.quantity_or("conductivity", Dimension::Conductivity, 0.0);
    s.finish();
    cfg.particle = construct(s, [&] { return Particle(radius, density, charge, eps, sigma); });
  }

  {
    Section s(root, "drive", ctx);
    Topology topology = Topology::Guide2D;
    const std::string topo = s.string_or("topology", "guide");
    try {
      topology = parse_topology(topo);
    } catch (const InvalidParameter& e) {
      s.fail("topology", e.what());
    }
    const double R = s.quantity_or("R", Dimension::Length, 2.35e-3);
    const double U = s.quantity_or("U", Dimension::Voltage, 0.0);
    const double V = s.quantity_or("V", Dimension::Voltage, 250.0);
    const std::string freq_key = s.one_of({"frequency", "omega"});
    double omega = 2.0 * constants::pi * 200.0;
    if (freq_key == "frequency") omega = 2.0 * constants::pi * s.quantity("frequency", Dimension::Frequency);
    if (freq_key == "omega") omega = s.quantity("omega", Dimension::AngularFrequency);
    if (freq_key.empty()) s.note_default("frequency");
    s.finish();
    cfg.drive = construct(s, [&] { return TrapDrive(topology, R, U, V, omega); });
  }

  {
    Section s(root, "environment", ctx);
    const double T = s.quantity_or("temperature", Dimension::Temperature, 300.0);
    const double damping = s.quantity_or("damping", Dimension::Rate, 0.0);
    const bool gravity = s.boolean_or("gravity", false);
    const double eps_m = s.quantity_or("medium_rel_permittivity", Dimension::Dimensionless, 1.0);
    const double sigma_m = s.quantity_or("medium_conductivity", Dimension::Conductivity, 0.0);
    s.finish();
    cfg.environment = construct(s, [&] { return Environment(T, damping, gravity, eps_m, sigma_m); });
  }

  {
    Section s(root, "piezo", ctx);
    const double A = s.quantity_or("amplitude", Dimension::Length, 1e-3);
    const std::string freq_key = s.one_of({"frequency", "omega"});
    double omega = 2.0 * constants::pi * 300e3;
    if (freq_key == "frequency") omega = 2.0 * constants::pi * s.quantity("frequency", Dimension::Frequency);
    if (freq_key == "omega") omega = s.quantity("omega", Dimension::AngularFrequency);
    if (freq_key.empty()) s.note_default("frequency");
    s.finish();
    cfg.piezo = construct(s, [&] { return PiezoDrive(A, omega); });
  }

  {
    Section s(root, "surface", ctx);
    const double gamma = s.quantity_or("gamma", Dimension::SurfaceEnergy, kDefaultSurfaceEnergy);
    s.finish();
    cfg.surface = construct(s, [&] { return SurfaceContact(gamma); });
  }

  {
    Section s(root, "guide", ctx);
    const double rod_d = s.quantity_or("rod_diameter", Dimension::Length, 2.4e-3);
    const double rod_off = s.quantity_or("rod_offset", Dimension::Length, 2.35e-3);
    const double tube_d = s.quantity_or("tube_diameter", Dimension::Length, 1.5e-3);
    const double tube_l = s.quantity_or("tube_length", Dimension::Length, 6e-3);
    const std::string margin = s.string_or("margin", "literal");
    if (margin == "literal") {
      cfg.margin = Margin::literal();
    } else if (margin == "conservative") {
      cfg.margin = Margin::conservative();
    } else {
      try {
        cfg.margin = Margin::custom(parse_quantity(margin, Dimension::Dimensionless));
      } catch (const Error&) {
        s.fail("margin", "expected literal, conservative or a positive factor, got '" + margin + "'");
      }
    }
    s.finish();
    cfg.geometry = construct(s, [&] { return GuideGeometry(rod_d, rod_off, tube_d, tube_l); });
  }

  {
    Section s(root, "simulation", ctx);
    SimConfig sim;
    sim.periods = s.quantity_or("periods", Dimension::Dimensionless, sim.periods);
    sim.dt_max_fraction = s.quantity_or("dt_max_fraction", Dimension::Dimensionless, sim.dt_max_fraction);
    sim.tolerance = s.quantity_or("tolerance", Dimension::Dimensionless, sim.tolerance);
    sim.escape_factor = s.quantity_or("escape_factor", Dimension::Dimensionless, sim.escape_factor);
    const long long seed = s.integer_or("seed", 0);
    if (seed < 0) s.fail("seed", "seed must be nonnegative");
    sim.seed = static_cast<std::uint64_t>(seed);
    sim.forces = ForceSet{};
    for (const auto& name : s.list_or("forces", {"coulomb"})) {
      try {
        sim.forces.add(parse_force(name));
      } catch (const InvalidParameter& e) {
        s.fail("forces", e.what());
      }
    }
    cfg.initial.thermal = s.boolean_or("thermal_init", false);
    cfg.initial.position = s.vector_or("initial_position", Dimension::Length, cfg.initial.position);
    cfg.initial.velocity = s.vector_or("initial_velocity", Dimension::Velocity, cfg.initial.velocity);
    s.finish();
    construct(s, [&] {
      sim.validate();
      return 0;
    });
    cfg.simulation = sim;
  }

  {
    Section s(root, "bruteforce", ctx);
    BruteforceOptions& b = cfg.bruteforce;
    cfg.bruteforce_periods = s.quantity_or("periods", Dimension::Dimensionless, 300.0);
    b.bounded_factor = s.quantity_or("bounded_factor", Dimension::Dimensionless, b.bounded_factor);
    b.bracket_width = s.quantity_or("bracket_width", Dimension::Dimensionless, b.bracket_width);
    b.max_bisections = static_cast<int>(s.integer_or("max_bisections", b.max_bisections));
    b.q_upper = s.quantity_or("q_upper", Dimension::Dimensionless, b.q_upper);
    b.initial_displacement =
        s.quantity_or("initial_displacement", Dimension::Length, b.initial_displacement);
    s.finish();
    if (!(b.bounded_factor > 1.0)) s.fail("bounded_factor", "must be > 1");
    if (!(b.bracket_width > 0.0)) s.fail("bracket_width", "must be positive");
    if (b.max_bisections < 1) s.fail("max_bisections", "must be >= 1");
    if (!(b.q_upper > 0.0)) s.fail("q_upper", "must be positive");
    if (!(cfg.bruteforce_periods >= 1.0)) s.fail("periods", "must be >= 1");
  }

  cfg.defaulted = std::move(ctx.defaulted);
  return cfg;
}

ResolvedConfig parse_config_file(const std::filesystem::path& path,
                                 const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "", 1, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string(), overrides);
}

std::filesystem::path resolve_config_path(const std::filesystem::path& path) {
  if (std::filesystem::exists(path) || path.is_absolute()) return path;
  if (const char* dir = std::getenv(kConfigDirEnv); dir != nullptr && *dir != '\0') {
    const std::filesystem::path candidate = std::filesystem::path(dir) / path;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return path;
}

nlohmann::json ResolvedConfig::to_json() const {
  using nlohmann::json;
  json forces = json::array();
  for (Force f : {Force::Coulomb, Force::Damping, Force::Gravity, Force::Dep}) {
    if (simulation.forces.has(f)) forces.push_back(std::string(to_string(f)));
  }
  auto vec = [](const Vec3& v) { return json::array({v.x, v.y, v.z}); };
  return json{
      {"source", source},
      {"particle",
       {{"radius_m", particle.radius()},
        {"density_kg_m3", particle.density()},
        {"mass_kg", particle.mass()},
        {"charge_C", particle.charge()},
        {"rel_permittivity", particle.rel_permittivity()},
        {"conductivity_S_m", particle.conductivity()}}},
      {"drive",
       {{"topology", std::string(paultrap::to_string(drive.topology()))},
        {"R_m", drive.length_scale()},
        {"U_V", drive.dc_voltage()},
        {"V_V", drive.rf_amplitude()},
        {"omega_rad_s", drive.omega()}}},
      {"environment",
       {{"temperature_K", environment.temperature()},
        {"damping_1_s", environment.damping_rate()},
        {"gravity", environment.gravity()},
        {"medium_rel_permittivity", environment.medium_rel_permittivity()},
        {"medium_conductivity_S_m", environment.medium_conductivity()}}},
      {"piezo", {{"amplitude_m", piezo.amplitude()}, {"omega_rad_s", piezo.omega()}}},
      {"surface", {{"gamma_J_m2", surface.gamma()}}},
      {"guide",
       {{"rod_diameter_m", geometry.rod_diameter()},
        {"rod_offset_m", geometry.rod_offset()},
        {"tube_diameter_m", geometry.tube_diameter()},
        {"tube_length_m", geometry.tube_length()},
        {"margin_policy", std::string(paultrap::to_string(margin.policy))},
        {"margin_factor", margin.factor}}},
      {"simulation",
       {{"periods", simulation.periods},
        {"dt_max_fraction", simulation.dt_max_fraction},
        {"tolerance", simulation.tolerance},
        {"escape_factor", simulation.escape_factor},
        {"seed", simulation.seed},
        {"forces", forces},
        {"thermal_init", initial.thermal},
        {"initial_position_m", vec(initial.position)},
        {"initial_velocity_m_s", vec(initial.velocity)}}},
      {"bruteforce",
       {{"periods", bruteforce_periods},
        {"bounded_factor", bruteforce.bounded_factor},
        {"bracket_width", bruteforce.bracket_width},
        {"max_bisections", bruteforce.max_bisections},
        {"q_upper", bruteforce.q_upper},
        {"initial_displacement_m", bruteforce.initial_displacement}}},
      {"defaulted", defaulted},
      {"overrides", overrides},
  };
}

}  // namespace paultrap::cli
