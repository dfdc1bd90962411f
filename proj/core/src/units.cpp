#include "paultrap/units.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "paultrap/constants.hpp"

namespace paultrap {

namespace {

using UnitTable = std::map<std::string, double, std::less<>>;

const UnitTable& units_for(Dimension d) {
  static const UnitTable empty{};
  static const UnitTable length{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6},
                                {"µm", 1e-6}, {"μm", 1e-6}, {"nm", 1e-9}};
  static const UnitTable velocity{{"m/s", 1.0}, {"mm/s", 1e-3}, {"um/s", 1e-6}, {"µm/s", 1e-6}};
  static const UnitTable density{{"kg/m^3", 1.0}, {"kg/m3", 1.0}, {"g/cm^3", 1e3}, {"g/cm3", 1e3}};
  static const UnitTable charge{{"C", 1.0}, {"e", constants::elementary_charge}};
  static const UnitTable voltage{{"V", 1.0}, {"mV", 1e-3}, {"kV", 1e3}};
  static const UnitTable frequency{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
  static const UnitTable angular{{"rad/s", 1.0}, {"krad/s", 1e3}, {"Mrad/s", 1e6}};
  static const UnitTable rate{{"1/s", 1.0}, {"/s", 1.0}, {"s^-1", 1.0}, {"Hz", 1.0}, {"kHz", 1e3}};
  static const UnitTable temperature{{"K", 1.0}, {"mK", 1e-3}};
  static const UnitTable conductivity{{"S/m", 1.0}, {"mS/m", 1e-3}, {"uS/m", 1e-6}};
  static const UnitTable surface{{"J/m^2", 1.0}, {"J/m2", 1.0}, {"mJ/m^2", 1e-3}, {"mJ/m2", 1e-3}};
  switch (d) {
    case Dimension::Dimensionless:
      return empty;
    case Dimension::Length:
      return length;
    case Dimension::Velocity:
      return velocity;
    case Dimension::Density:
      return density;
    case Dimension::Charge:
      return charge;
    case Dimension::Voltage:
      return voltage;
    case Dimension::Frequency:
      return frequency;
    case Dimension::AngularFrequency:
      return angular;
    case Dimension::Rate:
      return rate;
    case Dimension::Temperature:
      return temperature;
    case Dimension::Conductivity:
      return conductivity;
    case Dimension::SurfaceEnergy:
      return surface;
  }
  return empty;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Dimensionless:
      return "dimensionless";
    case Dimension::Length:
      return "length";
    case Dimension::Velocity:
      return "velocity";
    case Dimension::Density:
      return "density";
    case Dimension::Charge:
      return "charge";
    case Dimension::Voltage:
      return "voltage";
    case Dimension::Frequency:
      return "frequency";
    case Dimension::AngularFrequency:
      return "angular frequency";
    case Dimension::Rate:
      return "rate";
    case Dimension::Temperature:
      return "temperature";
    case Dimension::Conductivity:
      return "conductivity";
    case Dimension::SurfaceEnergy:
      return "surface energy";
  }
  return "unknown";
}

double parse_quantity(std::string_view text, Dimension dim, double bare_scale) {
  const std::string_view s = trim(text);
  if (s.empty()) throw UnitError("empty quantity");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data()) {
    throw UnitError("'" + std::string(s) + "' does not start with a number");
  }
  if (!std::isfinite(value)) throw UnitError("'" + std::string(s) + "' is not finite");
  const std::string_view unit = trim(std::string_view(ptr, s.data() + s.size() - ptr));
  if (unit.empty()) return value * bare_scale;

  const UnitTable& table = units_for(dim);
  const auto it = table.find(unit);
  if (it == table.end()) {
    std::string known;
    for (const auto& [name, _] : table) known += (known.empty() ? "" : ", ") + name;
    throw UnitError("unknown " + std::string(to_string(dim)) + " unit '" + std::string(unit) +
                    "'" + (known.empty() ? " (expected a bare number)" : " (expected one of " + known + ")"));
  }
  return value * it->second;
}

std::vector<double> parse_range(std::string_view text, Dimension dim, double bare_scale) {
  const std::string_view s = trim(text);
  if (s.find(':') != std::string_view::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3 && parts.size() != 4) {
      throw UnitError("range '" + std::string(s) + "' must be start:stop:count[:log]");
    }
    const double start = parse_quantity(parts[0], dim, bare_scale);
    const double stop = parse_quantity(parts[1], dim, bare_scale);
    int count = 0;
    const std::string_view count_text = trim(parts[2]);
    const auto [ptr, ec] =
        std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc{} || ptr != count_text.data() + count_text.size() || count < 1) {
      throw UnitError("range count '" + std::string(count_text) + "' must be a positive integer");
    }
    const bool log = parts.size() == 4;
    if (log && trim(parts[3]) != "log") throw UnitError("range spacing must be 'log'");
    if (log && !(start > 0.0 && stop > 0.0)) throw UnitError("log range needs positive endpoints");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      if (i + 1 == count && count > 1) {
        out.push_back(stop);
      } else {
        out.push_back(log ? start * std::pow(stop / start, f) : start + f * (stop - start));
      }
    }
    return out;
  }
  std::vector<double> out;
  for (const auto part : split(s, ',')) out.push_back(parse_quantity(part, dim, bare_scale));
  return out;
}

}  // namespace paultrap
