#include "paultrap/mathieu.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paultrap/constants.hpp"
#include "paultrap/error.hpp"

namespace paultrap {

double MathieuParams::max_abs_q() const {
  double m = 0.0;
  for (int i = 0; i < axis_count(); ++i) m = std::max(m, std::abs(q[i]));
  return m;
}

MathieuParams mathieu_params(const Particle& p, const TrapDrive& drive) {
  const double m = p.mass();
  const double w = drive.omega();
  const double R = drive.length_scale();
  const double denom = m * w * w * R * R;
  const double a_unit = 4.0 * p.charge() * drive.dc_voltage() / denom;
  const double q_unit = 2.0 * p.charge() * drive.rf_amplitude() / denom;

  MathieuParams out;
  out.topology = drive.topology();
  out.drive_omega = w;
  out.status = p.charge() == 0.0 ? ParamStatus::FreeParticle : ParamStatus::Ok;
  if (drive.topology() == Topology::Ring3D) {
    out.a = {-a_unit, -a_unit, 2.0 * a_unit};
    out.q = {q_unit, q_unit, -2.0 * q_unit};
  } else {
    out.a = {a_unit, -a_unit, 0.0};
    out.q = {q_unit, -q_unit, 0.0};
  }
  return out;
}

StabilityVerdict is_stable(const MathieuParams& params) {
  StabilityVerdict v;
  v.axis = {true, true, true};
  v.overall = true;
  for (int i = 0; i < params.axis_count(); ++i) {
    if (params.a[i] != 0.0) {
      throw DomainError("outside implemented stability criterion: a_" + std::to_string(i) +
                        " is nonzero (only a = 0 is supported)");
    }
    v.axis[i] = std::abs(params.q[i]) <= kStabilityLimit;
    v.overall = v.overall && v.axis[i];
  }
  return v;
}

double secular_frequency(const MathieuParams& params, int axis) {
  if (axis < 0 || axis >= params.axis_count()) {
    throw InvalidParameter("axis " + std::to_string(axis) + " is not confined by this topology");
  }
  const double radicand = params.a[axis] + 0.5 * params.q[axis] * params.q[axis];
  if (!(radicand > 0.0)) {
    throw DomainError("no harmonic secular motion on axis " + std::to_string(axis));
  }
  return 0.5 * params.drive_omega * std::sqrt(radicand);
}

std::array<double, 3> secular_frequencies(const MathieuParams& params) {
  std::array<double, 3> out{};
  for (int i = 0; i < params.axis_count(); ++i) out[i] = secular_frequency(params, i);
  return out;
}

SecularSolution make_secular_solution(const MathieuParams& params,
                                      const std::array<double, 3>& amplitude,
                                      const std::array<double, 3>& phase) {
  SecularSolution sol;
  sol.amplitude = amplitude;
  sol.phase = phase;
  sol.drive_omega = params.drive_omega;
  for (int i = 0; i < 3; ++i) {
    if (i >= params.axis_count()) {
      if (amplitude[i] != 0.0) {
        throw InvalidParameter("nonzero amplitude on an unconfined axis");
      }
      continue;
    }
    sol.q[i] = params.q[i];
    if (amplitude[i] != 0.0) sol.omega[i] = secular_frequency(params, i);
  }
  return sol;
}

Vec3 analytic_solution(const SecularSolution& sol, double t) {
  Vec3 r;
  const double drive = std::cos(sol.drive_omega * t);
  for (int i = 0; i < 3; ++i) {
    r[i] = sol.amplitude[i] * std::cos(sol.omega[i] * t + sol.phase[i]) *
           (1.0 + 0.5 * sol.q[i] * drive);
  }
  return r;
}

Vec3 analytic_velocity(const SecularSolution& sol, double t) {
  Vec3 v;
  const double W = sol.drive_omega;
  for (int i = 0; i < 3; ++i) {
    const double arg = sol.omega[i] * t + sol.phase[i];
    const double slow = std::cos(arg);
    const double slow_dot = -sol.omega[i] * std::sin(arg);
    const double fast = 1.0 + 0.5 * sol.q[i] * std::cos(W * t);
    const double fast_dot = -0.5 * sol.q[i] * W * std::sin(W * t);
    v[i] = sol.amplitude[i] * (slow_dot * fast + slow * fast_dot);
  }
  return v;
}

double thermal_secular_amplitude(const Particle& p, const Environment& env,
                                 double omega_secular) {
  if (!(omega_secular > 0.0)) throw DomainError("thermal amplitude needs a positive secular frequency");
  const double m = p.mass();
  return std::sqrt(4.0 * constants::boltzmann * env.temperature() /
                   (m * omega_secular * omega_secular));
}

double rf_amplitude_for_q(const Particle& p, const TrapDrive& drive, double q_x) {
  if (p.charge() == 0.0) throw DomainError("a neutral particle has q = 0 for every RF amplitude");
  const double w = drive.omega();
  const double R = drive.length_scale();
  return std::abs(q_x * p.mass() * w * w * R * R / (2.0 * p.charge()));
}

double rf_amplitude_for_secular_frequency(const Particle& p, const TrapDrive& drive,
                                          double omega_secular) {
  // a = 0: ω = Ω q / (2√2)  ⇒  q = 2√2 ω / Ω.
  const double q = 2.0 * std::sqrt(2.0) * omega_secular / drive.omega();
  return rf_amplitude_for_q(p, drive, q);
}

}  // namespace paultrap
