#pragma once

// Ideal quadrupole fields and the cycle-averaged forces derived from them.
//
// Ring trap:   Φ = (U + V cos Ωt)/(2R²) · (x² + y² − 2z²)
// Linear guide: Φ = (U + V cos Ωt)/(2R²) · (x² − y²)
//
// The "RF envelope" E₀(r) is the amplitude of the cos Ωt part of E, so that
// E(r, t) = E_dc(r) + E₀(r) cos Ωt. Ponderomotive and DEP forces use E₀ only.

#include <complex>

#include "paultrap/model.hpp"
#include "paultrap/vec3.hpp"

namespace paultrap {

struct FieldSample {
  double potential{0.0};     // V
  Vec3 field;                // E(r, t), V/m
  Vec3 rf_envelope;          // E₀(r), V/m
  Vec3 grad_envelope_sq;     // ∇|E₀|², V²/m³
};

double ring_trap_potential(double x, double y, double z, double t, const TrapDrive& drive);
double guide_potential(double x, double y, double t, const TrapDrive& drive);
/// Dispatches on the drive topology; the guide potential ignores z.
double potential(const Vec3& r, double t, const TrapDrive& drive);

/// Analytic E = −∇Φ and analytic ∇|E₀|².
FieldSample field_at(const Vec3& r, double t, const TrapDrive& drive);
Vec3 electric_field(const Vec3& r, double t, const TrapDrive& drive);
Vec3 rf_envelope(const Vec3& r, const TrapDrive& drive);

/// Φ_p = q² |E₀|² / (4 m Ω²).
double ponderomotive_potential(const Vec3& r, const Particle& p, const TrapDrive& drive);
/// F_p = −q² ∇|E₀|² / (4 m Ω²).
Vec3 ponderomotive_force(const Vec3& r, const Particle& p, const TrapDrive& drive);

/// Micromotion displacement amplitude ρ = −q E₀ / (m Ω²); ρ(t) = ρ cos Ωt.
Vec3 micromotion_amplitude(const Vec3& r, const Particle& p, const TrapDrive& drive);

/// ε*(ω) = ε − iσ/ω.
class ComplexPermittivity {
 public:
  ComplexPermittivity(double epsilon, double sigma, double omega);

  double epsilon() const { return epsilon_; }
  double sigma() const { return sigma_; }
  double omega() const { return omega_; }
  std::complex<double> value() const;

 private:
  double epsilon_;
  double sigma_;
  double omega_;
};

/// K(ω) = (ε_p* − ε_m*)/(ε_p* + 2ε_m*). Throws DomainError if |ε_p* + 2ε_m*| < 1e-30.
std::complex<double> clausius_mossotti(const ComplexPermittivity& particle,
                                       const ComplexPermittivity& medium);
std::complex<double> clausius_mossotti(const Particle& p, const Environment& env, double omega);

/// α(ω) = 4π ε_m* a³ K(ω).
std::complex<double> polarizability(const Particle& p, const Environment& env, double omega);

/// Cycle-averaged dipole energy ⟨U⟩ = −¼ Re{α} |E₀|².
double dep_energy(const Vec3& r, const Particle& p, const Environment& env,
                  const TrapDrive& drive);

/// ⟨F⟩ = ¼ Re{α} ∇|E₀|². Valid when the sphere is small against the field
/// variation length; this is not checked.
Vec3 dep_force(const Vec3& r, const Particle& p, const Environment& env, const TrapDrive& drive);

}  // namespace paultrap
