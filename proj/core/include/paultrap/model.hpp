#pragma once

// Shared domain types. Every quantity is stored in SI units.

#include <string_view>

namespace paultrap {

enum class Topology { Ring3D, Guide2D };

std::string_view to_string(Topology topology);
/// Accepts "ring", "ring3d", "guide", "guide2d" (case-insensitive).
Topology parse_topology(std::string_view text);

/// Charge of `n` elementary charges, in coulombs.
constexpr double elementary_charges(double n) { return n * 1.602176634e-19; }

/// Mass of a homogeneous sphere, (4π/3) r³ ρ. Accepts r = 0.
double sphere_mass(double radius, double density);

/// Homogeneous dielectric sphere.
class Particle {
 public:
  Particle(double radius, double density, double charge = 0.0, double rel_permittivity = 1.0,
           double conductivity = 0.0);

  double radius() const { return radius_; }
  double density() const { return density_; }
  double charge() const { return charge_; }
  double rel_permittivity() const { return rel_permittivity_; }
  double conductivity() const { return conductivity_; }
  double mass() const { return mass_; }

  Particle with_charge(double charge) const;
  Particle with_radius(double radius) const;
  Particle with_density(double density) const;

 private:
  double radius_;
  double density_;
  double charge_;
  double rel_permittivity_;
  double conductivity_;
  double mass_;
};

double particle_mass(const Particle& p);

inline constexpr double kDefaultSurfaceEnergy = 10e-3;  // J/m², coated glass

/// Sphere-on-plane contact, characterised by its effective surface energy.
class SurfaceContact {
 public:
  explicit SurfaceContact(double gamma = kDefaultSurfaceEnergy);
  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

/// Ideal quadrupole drive: potential (U + V cos Ωt)/(2R²) · shape(x, y, z).
class TrapDrive {
 public:
  TrapDrive(Topology topology, double length_scale, double dc_voltage, double rf_amplitude,
            double omega);

  Topology topology() const { return topology_; }
  double length_scale() const { return length_scale_; }
  double dc_voltage() const { return dc_voltage_; }
  double rf_amplitude() const { return rf_amplitude_; }
  double omega() const { return omega_; }
  double period() const;

  TrapDrive with_rf_amplitude(double v) const;
  TrapDrive with_omega(double omega) const;
  TrapDrive with_dc_voltage(double u) const;

 private:
  Topology topology_;
  double length_scale_;
  double dc_voltage_;
  double rf_amplitude_;
  double omega_;
};

class Environment {
 public:
  Environment(double temperature = 0.0, double damping_rate = 0.0, bool gravity = false,
              double medium_rel_permittivity = 1.0, double medium_conductivity = 0.0);

  double temperature() const { return temperature_; }
  /// Linear velocity damping rate γ in F = −m γ v.
  double damping_rate() const { return damping_rate_; }
  bool gravity() const { return gravity_; }
  double medium_rel_permittivity() const { return medium_rel_permittivity_; }
  double medium_conductivity() const { return medium_conductivity_; }

  Environment with_temperature(double t) const;
  Environment with_damping_rate(double rate) const;

 private:
  double temperature_;
  double damping_rate_;
  bool gravity_;
  double medium_rel_permittivity_;
  double medium_conductivity_;
};

/// Harmonic surface displacement z(t) = A sin(ωt).
class PiezoDrive {
 public:
  PiezoDrive(double amplitude, double omega);
  static PiezoDrive from_frequency(double amplitude, double frequency_hz);

  double amplitude() const { return amplitude_; }
  double omega() const { return omega_; }
  double peak_acceleration() const { return amplitude_ * omega_ * omega_; }

 private:
  double amplitude_;
  double omega_;
};

}  // namespace paultrap
