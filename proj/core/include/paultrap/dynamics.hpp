#pragma once

// Full equation of motion m r̈ = q E(r, t) − m γ v − m g ẑ + ⟨F_DEP⟩,
// integrated with an adaptive Dormand–Prince 5(4) stepper whose step is
// capped at a fixed fraction of the RF period.

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "paultrap/model.hpp"
#include "paultrap/vec3.hpp"

namespace paultrap {

enum class Force : unsigned {
  Coulomb = 1u << 0,
  Damping = 1u << 1,
  Gravity = 1u << 2,
  Dep = 1u << 3,
};

class ForceSet {
 public:
  constexpr ForceSet() = default;
  constexpr ForceSet(std::initializer_list<Force> forces) {
    for (Force f : forces) bits_ |= static_cast<unsigned>(f);
  }
  constexpr bool has(Force f) const { return (bits_ & static_cast<unsigned>(f)) != 0u; }
  constexpr ForceSet& add(Force f) {
    bits_ |= static_cast<unsigned>(f);
    return *this;
  }
  constexpr bool empty() const { return bits_ == 0u; }
  constexpr unsigned bits() const { return bits_; }
  friend constexpr bool operator==(ForceSet, ForceSet) = default;

 private:
  unsigned bits_{0u};
};

std::string_view to_string(Force f);
/// "coulomb", "damping", "gravity", "dep".
Force parse_force(std::string_view name);

struct SimConfig {
  double dt_max_fraction{1.0 / 200.0};  // step cap, in drive periods
  double periods{20.0};                 // duration, in drive periods
  double tolerance{1e-9};               // relative local error per step
  ForceSet forces{Force::Coulomb};
  std::uint64_t seed{0};
  double escape_factor{100.0};  // escape radius in units of the drive length scale R

  /// Throws InvalidParameter unless dt_max_fraction ≤ 1/100, periods ≥ 1 and tolerance > 0.
  void validate() const;
};

struct State {
  Vec3 position;
  Vec3 velocity;
};

struct Sample {
  double t{0.0};
  Vec3 position;
  Vec3 velocity;
};

enum class RunStatus { Completed, Escaped, StepFailure };
std::string_view to_string(RunStatus s);

struct RunSummary {
  RunStatus status{RunStatus::Completed};
  double t_end{0.0};
  std::size_t accepted_steps{0};
  std::size_t rejected_steps{0};
  double step_cap{0.0};        // s
  double error_estimate{0.0};  // sum of accepted local position error estimates, m
  double max_radius{0.0};      // confined-plane radius for the guide, |r| for the ring
  bool stopped_by_observer{false};
};

struct Trajectory {
  std::vector<Sample> samples;
  RunSummary summary;

  RunStatus status() const { return summary.status; }
};

/// Called with every accepted sample, including the initial state. Return
/// false to stop the run early.
using SampleObserver = std::function<bool(const Sample&)>;

RunSummary propagate(const Particle& p, const TrapDrive& drive, const Environment& env,
                     const State& init, const SimConfig& cfg, const SampleObserver& observer);

Trajectory integrate(const Particle& p, const TrapDrive& drive, const Environment& env,
                     const State& init, const SimConfig& cfg);

/// Acceleration from the selected forces.
Vec3 acceleration(const Particle& p, const TrapDrive& drive, const Environment& env,
                  ForceSet forces, const Vec3& r, const Vec3& v, double t);

/// ½ m v² + q Φ(r, t) (+ m g z with gravity).
double mechanical_energy(const Particle& p, const TrapDrive& drive, const Environment& env,
                         ForceSet forces, const Sample& s);

/// Secular angular frequency estimated from sign changes of one coordinate.
/// Returns NaN with fewer than two crossings.
double zero_crossing_frequency(const std::vector<Sample>& samples, int axis);

/// Draws (x, y, vx, vy) from the canonical distribution of a 2D isotropic
/// oscillator at frequency ω; z and vz are zero. Deterministic in `seed`.
State sample_thermal_state(const Particle& p, const Environment& env, double omega_secular,
                           std::uint64_t seed);

struct BruteforceOptions {
  double bounded_factor{50.0};        // bounded ⇔ max |r| < factor · |r_init|
  double bracket_width{0.01};         // target width in q at ≥ 300 periods
  int max_bisections{40};
  double q_upper{1.2};                // must be unbounded
  double initial_displacement{0.0};   // along x; 0 selects 1e-3 · R
  double reference_periods{300.0};    // below this the estimate is low-confidence
};

struct QCriticalEstimate {
  double q_low{0.0};   // largest q classified bounded
  double q_high{0.0};  // smallest q classified unbounded
  double v_low{0.0};
  double v_high{0.0};
  int bisections{0};
  bool low_confidence{false};

  double width() const { return q_high - q_low; }
  double midpoint() const { return 0.5 * (q_low + q_high); }
};

/// Bisection over the RF amplitude (hence |q_x|) classifying runs by
/// boundedness. Only the Coulomb force is used. The requested width scales
/// as reference_periods / cfg.periods for short runs.
QCriticalEstimate bruteforce_q_critical(const Particle& p, const TrapDrive& drive_template,
                                        const SimConfig& cfg, const BruteforceOptions& opts = {});

/// Classifies one drive by the same boundedness rule used in the bisection.
bool is_bounded_run(const Particle& p, const TrapDrive& drive, const SimConfig& cfg,
                    const BruteforceOptions& opts = {});

}  // namespace paultrap
