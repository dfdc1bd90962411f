#pragma once

// Mathieu parameters, the a = 0 stability criterion, secular frequencies and
// the lowest-order micromotion-modulated solution.

#include <array>

#include "paultrap/model.hpp"
#include "paultrap/vec3.hpp"

namespace paultrap {

inline constexpr double kStabilityLimit = 0.908;

enum class ParamStatus {
  Ok,
  FreeParticle,  // zero charge: all parameters vanish
};

struct MathieuParams {
  Topology topology{Topology::Guide2D};
  std::array<double, 3> a{};
  std::array<double, 3> q{};
  double drive_omega{0.0};
  ParamStatus status{ParamStatus::Ok};

  /// Number of confined axes: 3 for the ring trap, 2 (x, y) for the guide.
  int axis_count() const { return topology == Topology::Ring3D ? 3 : 2; }
  /// Largest |q_i| over the confined axes.
  double max_abs_q() const;
};

MathieuParams mathieu_params(const Particle& p, const TrapDrive& drive);

struct StabilityVerdict {
  std::array<bool, 3> axis{};  // unused axes are reported stable
  bool overall{false};
};

/// stable_i ⇔ |q_i| ≤ 0.908. Only implemented for a_i = 0; throws DomainError otherwise.
StabilityVerdict is_stable(const MathieuParams& params);

/// ω_i = (Ω/2) sqrt(a_i + q_i²/2). Throws DomainError if the radicand is not positive.
double secular_frequency(const MathieuParams& params, int axis);
/// All confined axes; the guide's free z axis reports 0.
std::array<double, 3> secular_frequencies(const MathieuParams& params);

struct SecularSolution {
  std::array<double, 3> amplitude{};
  std::array<double, 3> phase{};
  std::array<double, 3> omega{};
  std::array<double, 3> q{};
  double drive_omega{0.0};
};

/// Builds a solution from per-axis amplitudes; phases default to zero. Axes
/// with zero amplitude do not need a defined secular frequency.
SecularSolution make_secular_solution(const MathieuParams& params,
                                      const std::array<double, 3>& amplitude,
                                      const std::array<double, 3>& phase = {});

/// x_i(t) = x0_i cos(ω_i t + φ_i) (1 + (q_i/2) cos Ωt).
Vec3 analytic_solution(const SecularSolution& sol, double t);
/// Time derivative of analytic_solution.
Vec3 analytic_velocity(const SecularSolution& sol, double t);

/// r₀ = sqrt(4 k_B T / (m ω²)).
double thermal_secular_amplitude(const Particle& p, const Environment& env, double omega_secular);

/// RF amplitude V that puts the x-axis parameter at `q_x` for this particle and drive.
double rf_amplitude_for_q(const Particle& p, const TrapDrive& drive, double q_x);

/// RF amplitude V giving the requested radial (x-axis) secular frequency at a = 0.
double rf_amplitude_for_secular_frequency(const Particle& p, const TrapDrive& drive,
                                          double omega_secular);

}  // namespace paultrap
