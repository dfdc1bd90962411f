#pragma once

// Piezo-launch feasibility: van der Waals adhesion (DMT contact) against the
// peak inertial acceleration of a harmonically vibrating substrate.

#include "paultrap/model.hpp"

namespace paultrap {

struct LaunchAssessment {
  double vdw_force;               // N
  double required_acceleration;   // m/s²
  double available_acceleration;  // m/s²
  double min_radius;              // m
  bool launchable;
};

/// F = 4πγr.
double dmt_adhesion_force(double radius, double gamma);
double vdw_force(const Particle& p, const SurfaceContact& s);

/// a = 3γ / (r² ρ), i.e. the adhesion force divided by the sphere mass.
double detachment_acceleration(double radius, double density, double gamma);
double detachment_acceleration(const Particle& p, const SurfaceContact& s);

double piezo_peak_acceleration(const PiezoDrive& d);

/// r_min = sqrt(3γ / (A ω² ρ)). Throws DomainError when A ω² = 0.
double min_launchable_radius(const PiezoDrive& d, const SurfaceContact& s, double density);

/// Launchable includes the boundary r = r_min. Only peak values are compared.
LaunchAssessment assess_launch(const Particle& p, const SurfaceContact& s, const PiezoDrive& d);

}  // namespace paultrap
