#include "paultrap/launch.hpp"

#include <cmath>

#include "paultrap/constants.hpp"
#include "paultrap/error.hpp"

namespace paultrap {

double dmt_adhesion_force(double radius, double gamma) {
  return 4.0 * constants::pi * gamma * radius;
}

double vdw_force(const Particle& p, const SurfaceContact& s) {
  return dmt_adhesion_force(p.radius(), s.gamma());
}

double detachment_acceleration(double radius, double density, double gamma) {
  return 3.0 * gamma / (radius * radius * density);
}

double detachment_acceleration(const Particle& p, const SurfaceContact& s) {
  return detachment_acceleration(p.radius(), p.density(), s.gamma());
}

double piezo_peak_acceleration(const PiezoDrive& d) { return d.peak_acceleration(); }

double min_launchable_radius(const PiezoDrive& d, const SurfaceContact& s, double density) {
  const double available = d.peak_acceleration();
  if (!(available > 0.0)) throw DomainError("no available acceleration (piezo amplitude is zero)");
  if (!(density > 0.0)) throw InvalidParameter("density must be positive");
  return std::sqrt(3.0 * s.gamma() / (available * density));
}

LaunchAssessment assess_launch(const Particle& p, const SurfaceContact& s, const PiezoDrive& d) {
  LaunchAssessment out{};
  out.vdw_force = vdw_force(p, s);
  out.required_acceleration = detachment_acceleration(p, s);
  out.available_acceleration = d.peak_acceleration();
  out.min_radius = min_launchable_radius(d, s, p.density());
  // Decided on the radius so that r == r_min is launchable regardless of the
  // rounding in the two acceleration expressions.
  out.launchable = p.radius() >= out.min_radius;
  return out;
}

}  // namespace paultrap
