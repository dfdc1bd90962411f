#include "paultrap/fields.hpp"

#include <cmath>
#include <string>

#include "paultrap/constants.hpp"
#include "paultrap/error.hpp"

namespace paultrap {

namespace {

void require_topology(const TrapDrive& drive, Topology expected, const char* op) {
  if (drive.topology() != expected) {
    throw TopologyMismatch(std::string(op) + " requires a " + std::string(to_string(expected)) +
                           " drive, got " + std::string(to_string(drive.topology())));
  }
}

// Gradient of the dimensionless shape function, per unit of (U + V cos Ωt)/(2R²).
Vec3 shape_gradient(const Vec3& r, Topology topology) {
  if (topology == Topology::Ring3D) return {2.0 * r.x, 2.0 * r.y, -4.0 * r.z};
  return {2.0 * r.x, -2.0 * r.y, 0.0};
}

double envelope_scale(const Particle& p, const TrapDrive& drive) {
  const double m = p.mass();
  const double w = drive.omega();
  if (!(m > 0.0) || !(w > 0.0)) throw DomainError("ponderomotive terms need m > 0 and Omega > 0");
  return p.charge() * p.charge() / (4.0 * m * w * w);
}

}  // namespace

double ring_trap_potential(double x, double y, double z, double t, const TrapDrive& drive) {
  require_topology(drive, Topology::Ring3D, "ring_trap_potential");
  const double R = drive.length_scale();
  const double amp = drive.dc_voltage() + drive.rf_amplitude() * std::cos(drive.omega() * t);
  return amp / (2.0 * R * R) * (x * x + y * y - 2.0 * z * z);
}

double guide_potential(double x, double y, double t, const TrapDrive& drive) {
  require_topology(drive, Topology::Guide2D, "guide_potential");
  const double R = drive.length_scale();
  const double amp = drive.dc_voltage() + drive.rf_amplitude() * std::cos(drive.omega() * t);
  return amp / (2.0 * R * R) * (x * x - y * y);
}

double potential(const Vec3& r, double t, const TrapDrive& drive) {
  if (drive.topology() == Topology::Ring3D) return ring_trap_potential(r.x, r.y, r.z, t, drive);
  return guide_potential(r.x, r.y, t, drive);
}

Vec3 electric_field(const Vec3& r, double t, const TrapDrive& drive) {
  const double R = drive.length_scale();
  const double amp = drive.dc_voltage() + drive.rf_amplitude() * std::cos(drive.omega() * t);
  return shape_gradient(r, drive.topology()) * (-amp / (2.0 * R * R));
}

Vec3 rf_envelope(const Vec3& r, const TrapDrive& drive) {
  const double R = drive.length_scale();
  return shape_gradient(r, drive.topology()) * (-drive.rf_amplitude() / (2.0 * R * R));
}

FieldSample field_at(const Vec3& r, double t, const TrapDrive& drive) {
  FieldSample s;
  s.potential = potential(r, t, drive);
  s.field = electric_field(r, t, drive);
  s.rf_envelope = rf_envelope(r, drive);
  const double R = drive.length_scale();
  const double k = 2.0 * drive.rf_amplitude() * drive.rf_amplitude() / (R * R * R * R);
  // |E₀|² = (V/R²)² (x² + y² + 4z²) for the ring, (V/R²)² (x² + y²) for the guide.
  if (drive.topology() == Topology::Ring3D) {
    s.grad_envelope_sq = {k * r.x, k * r.y, 4.0 * k * r.z};
  } else {
    s.grad_envelope_sq = {k * r.x, k * r.y, 0.0};
  }
  return s;
}

double ponderomotive_potential(const Vec3& r, const Particle& p, const TrapDrive& drive) {
  const Vec3 e0 = rf_envelope(r, drive);
  return envelope_scale(p, drive) * dot(e0, e0);
}

Vec3 ponderomotive_force(const Vec3& r, const Particle& p, const TrapDrive& drive) {
  return field_at(r, 0.0, drive).grad_envelope_sq * (-envelope_scale(p, drive));
}

Vec3 micromotion_amplitude(const Vec3& r, const Particle& p, const TrapDrive& drive) {
  const double w = drive.omega();
  if (!(w > 0.0)) throw DomainError("micromotion amplitude needs Omega > 0");
  return rf_envelope(r, drive) * (-p.charge() / (p.mass() * w * w));
}

ComplexPermittivity::ComplexPermittivity(double epsilon, double sigma, double omega)
    : epsilon_(epsilon), sigma_(sigma), omega_(omega) {
  if (!(epsilon > 0.0)) throw InvalidParameter("permittivity must be positive");
  if (!(sigma >= 0.0)) throw InvalidParameter("conductivity must be >= 0");
  if (!(omega >= 0.0)) throw InvalidParameter("angular frequency must be >= 0");
  if (sigma > 0.0 && !(omega > 0.0)) {
    throw DomainError("complex permittivity of a conductor needs omega > 0");
  }
}

std::complex<double> ComplexPermittivity::value() const {
  if (sigma_ == 0.0) return {epsilon_, 0.0};
  return {epsilon_, -sigma_ / omega_};
}

std::complex<double> clausius_mossotti(const ComplexPermittivity& particle,
                                       const ComplexPermittivity& medium) {
  const std::complex<double> ep = particle.value();
  const std::complex<double> em = medium.value();
  const std::complex<double> denom = ep + 2.0 * em;
  if (std::abs(denom) < 1e-30) throw DomainError("Clausius-Mossotti factor is singular");
  return (ep - em) / denom;
}

std::complex<double> clausius_mossotti(const Particle& p, const Environment& env, double omega) {
  const ComplexPermittivity particle(constants::vacuum_permittivity * p.rel_permittivity(),
                                     p.conductivity(), omega);
  const ComplexPermittivity medium(constants::vacuum_permittivity * env.medium_rel_permittivity(),
                                   env.medium_conductivity(), omega);
  return clausius_mossotti(particle, medium);
}

std::complex<double> polarizability(const Particle& p, const Environment& env, double omega) {
  const ComplexPermittivity medium(constants::vacuum_permittivity * env.medium_rel_permittivity(),
                                   env.medium_conductivity(), omega);
  const double a = p.radius();
  return 4.0 * constants::pi * a * a * a * medium.value() * clausius_mossotti(p, env, omega);
}

double dep_energy(const Vec3& r, const Particle& p, const Environment& env,
                  const TrapDrive& drive) {
  const Vec3 e0 = rf_envelope(r, drive);
  return -0.25 * polarizability(p, env, drive.omega()).real() * dot(e0, e0);
}

Vec3 dep_force(const Vec3& r, const Particle& p, const Environment& env, const TrapDrive& drive) {
  const double re_alpha = polarizability(p, env, drive.omega()).real();
  return field_at(r, 0.0, drive).grad_envelope_sq * (0.25 * re_alpha);
}

}  // namespace paultrap
