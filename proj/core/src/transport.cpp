#include "paultrap/transport.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "paultrap/error.hpp"
#include "paultrap/mathieu.hpp"

namespace paultrap {

GuideGeometry::GuideGeometry(double rod_diameter, double rod_offset, double tube_diameter,
                             double tube_length)
    : rod_diameter_(rod_diameter),
      rod_offset_(rod_offset),
      tube_diameter_(tube_diameter),
      tube_length_(tube_length) {
  if (!(rod_diameter > 0.0 && rod_offset > 0.0 && tube_diameter > 0.0 && tube_length > 0.0)) {
    throw InvalidParameter("guide geometry lengths must be positive");
  }
  const double free_bore = 2.0 * (rod_offset - 0.5 * rod_diameter);
  if (!(tube_diameter < free_bore)) {
    throw InvalidParameter("tube diameter must be smaller than the gap between the rods (" +
                           std::to_string(free_bore) + " m)");
  }
}

GuideGeometry GuideGeometry::with_tube_diameter(double d) const {
  return GuideGeometry(rod_diameter_, rod_offset_, d, tube_length_);
}

std::string_view to_string(MarginPolicy policy) {
  switch (policy) {
    case MarginPolicy::Literal:
      return "literal";
    case MarginPolicy::Conservative:
      return "conservative";
    case MarginPolicy::Custom:
      return "custom";
  }
  return "unknown";
}

Margin Margin::custom(double factor) {
  if (!(factor > 0.0)) throw InvalidParameter("margin factor must be positive");
  return {MarginPolicy::Custom, factor};
}

TransitVerdict transit_feasibility(const Particle& p, const Environment& env,
                                   const TrapDrive& drive, const GuideGeometry& geom,
                                   Margin margin) {
  const MathieuParams params = mathieu_params(p, drive);
  if (!is_stable(params).overall) throw DomainError("no confined transit: drive is unstable");
  TransitVerdict v;
  v.margin = margin;
  v.q = params.max_abs_q();
  try {
    v.omega_secular = secular_frequency(params, 0);
  } catch (const DomainError&) {
    throw DomainError("no confined transit: no radial secular motion");
  }
  v.r0 = thermal_secular_amplitude(p, env, v.omega_secular);
  v.clearance_ratio = v.r0 / geom.tube_radius();
  v.passes = v.r0 <= margin.factor * geom.tube_radius();
  return v;
}

OperatingWindow operating_window(const Particle& p, const Environment& env,
                                 const GuideGeometry& geom, const SweepSpec& spec) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  OperatingWindow out;
  out.grid.reserve(spec.rf_amplitudes.size() * spec.drive_omegas.size());
  double best = -std::numeric_limits<double>::infinity();
  for (double v_rf : spec.rf_amplitudes) {
    for (double omega : spec.drive_omegas) {
      const TrapDrive drive(spec.topology, spec.length_scale, spec.dc_voltage, v_rf, omega);
      const MathieuParams params = mathieu_params(p, drive);
      WindowPoint pt;
      pt.rf_amplitude = v_rf;
      pt.drive_omega = omega;
      pt.q = params.max_abs_q();
      pt.stable = is_stable(params).overall;
      const double radicand = params.a[0] + 0.5 * params.q[0] * params.q[0];
      if (radicand > 0.0) {
        pt.omega_secular = secular_frequency(params, 0);
        pt.r0 = thermal_secular_amplitude(p, env, pt.omega_secular);
        pt.clearance_ratio = pt.r0 / geom.tube_radius();
        pt.passes = pt.r0 <= spec.margin.factor * geom.tube_radius();
      } else {
        pt.omega_secular = nan;
        pt.r0 = nan;
        pt.clearance_ratio = nan;
        pt.passes = false;
      }
      pt.feasible = pt.stable && pt.passes;
      if (pt.feasible) {
        pt.score = std::min(kStabilityLimit - pt.q, 1.0 - pt.clearance_ratio);
        out.feasible.push_back(out.grid.size());
        if (pt.score > best) {
          best = pt.score;
          out.optimum = out.grid.size();
        }
      }
      out.grid.push_back(pt);
    }
  }
  return out;
}

}  // namespace paultrap
