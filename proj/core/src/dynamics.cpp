#include "paultrap/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "paultrap/constants.hpp"
#include "paultrap/error.hpp"
#include "paultrap/fields.hpp"
#include "paultrap/mathieu.hpp"

namespace paultrap {

std::string_view to_string(Force f) {
  switch (f) {
    case Force::Coulomb:
      return "coulomb";
    case Force::Damping:
      return "damping";
    case Force::Gravity:
      return "gravity";
    case Force::Dep:
      return "dep";
  }
  return "unknown";
}

Force parse_force(std::string_view name) {
  for (Force f : {Force::Coulomb, Force::Damping, Force::Gravity, Force::Dep}) {
    if (name == to_string(f)) return f;
  }
  throw InvalidParameter("unknown force '" + std::string(name) +
                         "' (expected coulomb, damping, gravity or dep)");
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed:
      return "completed";
    case RunStatus::Escaped:
      return "escaped";
    case RunStatus::StepFailure:
      return "step-failure";
  }
  return "unknown";
}

void SimConfig::validate() const {
  if (!(dt_max_fraction > 0.0 && dt_max_fraction <= 0.01)) {
    throw InvalidParameter("dt_max must be in (0, 1/100] of the drive period");
  }
  if (!(periods >= 1.0) || !std::isfinite(periods)) {
    throw InvalidParameter("duration must be at least one drive period");
  }
  if (!(tolerance > 0.0)) throw InvalidParameter("tolerance must be positive");
  if (!(escape_factor > 0.0)) throw InvalidParameter("escape factor must be positive");
}

namespace {

using StateVec = std::array<double, 6>;

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

class EquationOfMotion {
 public:
  EquationOfMotion(const Particle& p, const TrapDrive& drive, const Environment& env,
                   ForceSet forces)
      : p_(p), drive_(drive), env_(env), forces_(forces) {
    if (forces.has(Force::Dep)) {
      dep_scale_ = 0.25 * polarizability(p, env, drive.omega()).real() / p.mass();
    }
  }

  StateVec operator()(double t, const StateVec& y) const {
    const Vec3 r{y[0], y[1], y[2]};
    const Vec3 v{y[3], y[4], y[5]};
    const Vec3 acc = accel(r, v, t);
    return {v.x, v.y, v.z, acc.x, acc.y, acc.z};
  }

  Vec3 accel(const Vec3& r, const Vec3& v, double t) const {
    Vec3 acc;
    if (forces_.has(Force::Coulomb) && p_.charge() != 0.0) {
      acc += electric_field(r, t, drive_) * (p_.charge() / p_.mass());
    }
    if (forces_.has(Force::Damping)) acc -= v * env_.damping_rate();
    if (forces_.has(Force::Gravity)) acc.z -= constants::standard_gravity;
    if (forces_.has(Force::Dep)) {
      acc += field_at(r, t, drive_).grad_envelope_sq * dep_scale_;
    }
    return acc;
  }

 private:
  const Particle& p_;
  const TrapDrive& drive_;
  const Environment& env_;
  ForceSet forces_;
  double dep_scale_{0.0};
};

StateVec axpy(const StateVec& y, double h, std::initializer_list<std::pair<double, const StateVec*>> terms) {
  StateVec out = y;
  for (const auto& [coef, k] : terms) {
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < 6; ++i) out[i] += h * coef * (*k)[i];
  }
  return out;
}

double confined_radius(const Vec3& r, Topology topology) {
  if (topology == Topology::Guide2D) return std::hypot(r.x, r.y);
  return norm(r);
}

Sample to_sample(double t, const StateVec& y) {
  return {t, {y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
}

}  // namespace

Vec3 acceleration(const Particle& p, const TrapDrive& drive, const Environment& env,
                  ForceSet forces, const Vec3& r, const Vec3& v, double t) {
  return EquationOfMotion(p, drive, env, forces).accel(r, v, t);
}

double mechanical_energy(const Particle& p, const TrapDrive& drive, const Environment& env,
                         ForceSet forces, const Sample& s) {
  (void)env;
  double e = 0.5 * p.mass() * dot(s.velocity, s.velocity);
  if (forces.has(Force::Coulomb)) e += p.charge() * potential(s.position, s.t, drive);
  if (forces.has(Force::Gravity)) e += p.mass() * constants::standard_gravity * s.position.z;
  return e;
}

RunSummary propagate(const Particle& p, const TrapDrive& drive, const Environment& env,
                     const State& init, const SimConfig& cfg, const SampleObserver& observer) {
  cfg.validate();
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(init.position[i]) || !std::isfinite(init.velocity[i])) {
      throw InvalidParameter("initial state must be finite");
    }
  }

  const EquationOfMotion f(p, drive, env, cfg.forces);
  const double period = drive.period();
  const double t_end = cfg.periods * period;
  const double h_cap = cfg.dt_max_fraction * period;
  const double h_min = 1e-12 * h_cap;
  const double escape_radius = cfg.escape_factor * drive.length_scale();

  // Absolute error floors; without them a particle at rest at the origin
  // would demand zero error.
  const double len_ref = std::max(norm(init.position), 1e-6 * drive.length_scale());
  double vel_ref = std::max(norm(init.velocity), len_ref * drive.omega());
  if (cfg.forces.has(Force::Gravity)) vel_ref = std::max(vel_ref, constants::standard_gravity * period);
  const double atol_pos = cfg.tolerance * len_ref;
  const double atol_vel = cfg.tolerance * vel_ref;

  RunSummary summary;
  summary.step_cap = h_cap;

  StateVec y{init.position.x, init.position.y, init.position.z,
             init.velocity.x, init.velocity.y, init.velocity.z};
  double t = 0.0;
  summary.max_radius = confined_radius(init.position, drive.topology());
  if (observer && !observer(to_sample(t, y))) {
    summary.stopped_by_observer = true;
    return summary;
  }

  StateVec k1 = f(t, y);
  double h = h_cap;
  while (t < t_end) {
    const bool last = t + h >= t_end;
    const double step = last ? t_end - t : h;

    const StateVec k2 = f(t + c2 * step, axpy(y, step, {{a21, &k1}}));
    const StateVec k3 = f(t + c3 * step, axpy(y, step, {{a31, &k1}, {a32, &k2}}));
    const StateVec k4 = f(t + c4 * step, axpy(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const StateVec k5 =
        f(t + c5 * step, axpy(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const StateVec k6 = f(t + step, axpy(y, step,
                                         {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const StateVec y_new =
        axpy(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const StateVec k7 = f(t + step, y_new);

    double err = 0.0;
    double pos_err = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
      const double atol = i < 3 ? atol_pos : atol_vel;
      const double scale = atol + cfg.tolerance * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
      if (i < 3) pos_err = std::max(pos_err, std::abs(e));
    }
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

    const double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = last ? t_end : t + step;
      y = y_new;
      k1 = k7;
      ++summary.accepted_steps;
      summary.error_estimate += pos_err;
      const Vec3 r{y[0], y[1], y[2]};
      summary.max_radius = std::max(summary.max_radius, confined_radius(r, drive.topology()));
      summary.t_end = t;
      if (observer && !observer(to_sample(t, y))) {
        summary.stopped_by_observer = true;
        return summary;
      }
      if (confined_radius(r, drive.topology()) > escape_radius) {
        summary.status = RunStatus::Escaped;
        return summary;
      }
      h = std::min(h_cap, step * factor);
      if (last) break;
    } else {
      ++summary.rejected_steps;
      h = step * factor;
      if (h < h_min) {
        summary.status = RunStatus::StepFailure;
        return summary;
      }
    }
  }
  summary.status = RunStatus::Completed;
  return summary;
}

Trajectory integrate(const Particle& p, const TrapDrive& drive, const Environment& env,
                     const State& init, const SimConfig& cfg) {
  Trajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(cfg.periods / cfg.dt_max_fraction) + 2);
  traj.summary = propagate(p, drive, env, init, cfg, [&traj](const Sample& s) {
    traj.samples.push_back(s);
    return true;
  });
  return traj;
}

double zero_crossing_frequency(const std::vector<Sample>& samples, int axis) {
  std::vector<double> crossings;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double a = samples[i - 1].position[axis];
    const double b = samples[i].position[axis];
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      if (b == 0.0 && i + 1 < samples.size()) continue;  // counted on the next interval
      const double frac = a / (a - b);
      crossings.push_back(samples[i - 1].t + frac * (samples[i].t - samples[i - 1].t));
    }
  }
  if (crossings.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double span = crossings.back() - crossings.front();
  // Consecutive zero crossings are half a period apart.
  return constants::pi * static_cast<double>(crossings.size() - 1) / span;
}

State sample_thermal_state(const Particle& p, const Environment& env, double omega_secular,
                           std::uint64_t seed) {
  if (!(omega_secular > 0.0)) throw DomainError("thermal state needs a positive secular frequency");
  State s;
  const double kT = constants::boltzmann * env.temperature();
  if (kT == 0.0) return s;
  const double sigma_v = std::sqrt(kT / p.mass());
  const double sigma_x = sigma_v / omega_secular;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  s.position.x = sigma_x * unit(rng);
  s.position.y = sigma_x * unit(rng);
  s.velocity.x = sigma_v * unit(rng);
  s.velocity.y = sigma_v * unit(rng);
  return s;
}

namespace {

double initial_displacement(const TrapDrive& drive, const BruteforceOptions& opts) {
  return opts.initial_displacement > 0.0 ? opts.initial_displacement
                                         : 1e-3 * drive.length_scale();
}

}  // namespace

bool is_bounded_run(const Particle& p, const TrapDrive& drive, const SimConfig& cfg,
                    const BruteforceOptions& opts) {
  SimConfig run = cfg;
  run.forces = ForceSet{Force::Coulomb};
  const double x0 = initial_displacement(drive, opts);
  const double limit = opts.bounded_factor * x0;
  const Environment vacuum;
  bool bounded = true;
  const RunSummary summary =
      propagate(p, drive, vacuum, State{{x0, 0.0, 0.0}, {}}, run, [&](const Sample& s) {
        if (norm(s.position) >= limit) {
          bounded = false;
          return false;
        }
        return true;
      });
  return bounded && summary.status == RunStatus::Completed;
}

QCriticalEstimate bruteforce_q_critical(const Particle& p, const TrapDrive& drive_template,
                                        const SimConfig& cfg, const BruteforceOptions& opts) {
  if (p.charge() == 0.0) throw DomainError("stability bisection needs a charged particle");
  if (drive_template.dc_voltage() != 0.0) {
    throw DomainError("stability bisection is implemented for a = 0 (U = 0) only");
  }
  cfg.validate();

  const double scale = rf_amplitude_for_q(p, drive_template, 1.0);  // V per unit q
  auto bounded_at = [&](double q) {
    return is_bounded_run(p, drive_template.with_rf_amplitude(q * scale), cfg, opts);
  };

  QCriticalEstimate est;
  est.low_confidence = cfg.periods < opts.reference_periods;
  const double width = opts.bracket_width * std::max(1.0, opts.reference_periods / cfg.periods);

  double lo = 0.0;
  double hi = opts.q_upper;
  if (bounded_at(hi)) {
    throw ConvergenceError("upper q bound " + std::to_string(hi) + " is bounded; no instability found");
  }
  while (hi - lo > width) {
    if (est.bisections >= opts.max_bisections) {
      throw ConvergenceError("q_crit bisection did not converge within " +
                             std::to_string(opts.max_bisections) + " steps");
    }
    const double mid = 0.5 * (lo + hi);
    (bounded_at(mid) ? lo : hi) = mid;
    ++est.bisections;
  }
  est.q_low = lo;
  est.q_high = hi;
  est.v_low = lo * scale;
  est.v_high = hi * scale;
  return est;
}

}  // namespace paultrap
