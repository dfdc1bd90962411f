#include "paultrap/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "paultrap/constants.hpp"
#include "paultrap/error.hpp"

namespace paultrap {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidParameter(what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::Ring3D:
      return "ring";
    case Topology::Guide2D:
      return "guide";
  }
  return "unknown";
}

Topology parse_topology(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ring" || lower == "ring3d") return Topology::Ring3D;
  if (lower == "guide" || lower == "guide2d") return Topology::Guide2D;
  throw InvalidParameter("unknown topology '" + std::string(text) + "' (expected ring or guide)");
}

double sphere_mass(double radius, double density) {
  return 4.0 * constants::pi / 3.0 * radius * radius * radius * density;
}

Particle::Particle(double radius, double density, double charge, double rel_permittivity,
                   double conductivity)
    : radius_(radius),
      density_(density),
      charge_(charge),
      rel_permittivity_(rel_permittivity),
      conductivity_(conductivity),
      mass_(sphere_mass(radius, density)) {
  require(finite(radius) && radius > 0.0, "particle radius must be positive");
  require(finite(density) && density > 0.0, "particle density must be positive");
  require(finite(charge), "particle charge must be finite");
  require(finite(rel_permittivity) && rel_permittivity >= 1.0,
          "particle relative permittivity must be >= 1");
  require(finite(conductivity) && conductivity >= 0.0, "particle conductivity must be >= 0");
}

Particle Particle::with_charge(double charge) const {
  return Particle(radius_, density_, charge, rel_permittivity_, conductivity_);
}
Particle Particle::with_radius(double radius) const {
  return Particle(radius, density_, charge_, rel_permittivity_, conductivity_);
}
Particle Particle::with_density(double density) const {
  return Particle(radius_, density, charge_, rel_permittivity_, conductivity_);
}

double particle_mass(const Particle& p) { return sphere_mass(p.radius(), p.density()); }

SurfaceContact::SurfaceContact(double gamma) : gamma_(gamma) {
  require(finite(gamma) && gamma > 0.0, "surface energy must be positive");
}

TrapDrive::TrapDrive(Topology topology, double length_scale, double dc_voltage,
                     double rf_amplitude, double omega)
    : topology_(topology),
      length_scale_(length_scale),
      dc_voltage_(dc_voltage),
      rf_amplitude_(rf_amplitude),
      omega_(omega) {
  require(finite(length_scale) && length_scale > 0.0, "trap length scale R must be positive");
  require(finite(dc_voltage), "DC voltage must be finite");
  require(finite(rf_amplitude) && rf_amplitude >= 0.0, "RF amplitude must be >= 0");
  require(finite(omega) && omega > 0.0, "drive angular frequency must be positive");
}

double TrapDrive::period() const { return 2.0 * constants::pi / omega_; }

TrapDrive TrapDrive::with_rf_amplitude(double v) const {
  return TrapDrive(topology_, length_scale_, dc_voltage_, v, omega_);
}
TrapDrive TrapDrive::with_omega(double omega) const {
  return TrapDrive(topology_, length_scale_, dc_voltage_, rf_amplitude_, omega);
}
TrapDrive TrapDrive::with_dc_voltage(double u) const {
  return TrapDrive(topology_, length_scale_, u, rf_amplitude_, omega_);
}

Environment::Environment(double temperature, double damping_rate, bool gravity,
                         double medium_rel_permittivity, double medium_conductivity)
    : temperature_(temperature),
      damping_rate_(damping_rate),
      gravity_(gravity),
      medium_rel_permittivity_(medium_rel_permittivity),
      medium_conductivity_(medium_conductivity) {
  require(finite(temperature) && temperature >= 0.0, "temperature must be >= 0");
  require(finite(damping_rate) && damping_rate >= 0.0, "damping rate must be >= 0");
  require(finite(medium_rel_permittivity) && medium_rel_permittivity >= 1.0,
          "medium relative permittivity must be >= 1");
  require(finite(medium_conductivity) && medium_conductivity >= 0.0,
          "medium conductivity must be >= 0");
}

Environment Environment::with_temperature(double t) const {
  return Environment(t, damping_rate_, gravity_, medium_rel_permittivity_, medium_conductivity_);
}
Environment Environment::with_damping_rate(double rate) const {
  return Environment(temperature_, rate, gravity_, medium_rel_permittivity_, medium_conductivity_);
}

PiezoDrive::PiezoDrive(double amplitude, double omega) : amplitude_(amplitude), omega_(omega) {
  require(finite(amplitude) && amplitude >= 0.0, "piezo amplitude must be >= 0");
  require(finite(omega) && omega > 0.0, "piezo angular frequency must be positive");
}

PiezoDrive PiezoDrive::from_frequency(double amplitude, double frequency_hz) {
  return PiezoDrive(amplitude, 2.0 * constants::pi * frequency_hz);
}

}  // namespace paultrap
