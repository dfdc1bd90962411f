#include "doctest.h"

#include <cmath>

#include "../oracles.hpp"
#include "paultrap/constants.hpp"
#include "paultrap/error.hpp"
#include "paultrap/dynamics.hpp"
#include "paultrap/mathieu.hpp"

using namespace paultrap;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 1.602176634e-19;

const Particle kNd(37.5e-9, 3500.0, 20.0 * kE);

TrapDrive guide_at_q(double q, Topology topo = Topology::Guide2D) {
  const TrapDrive base(topo, 2.35e-3, 0.0, 1.0, 2.0 * kPi * 2000.0);
  return base.with_rf_amplitude(rf_amplitude_for_q(kNd, base, q));
}

SimConfig cfg_periods(double periods) {
  SimConfig c;
  c.periods = periods;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt_max_fraction = 1.0 / 50.0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = SimConfig{};
  c.periods = 0.5;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = SimConfig{};
  c.tolerance = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  CHECK(parse_force("dep") == Force::Dep);
  CHECK_THROWS_AS(parse_force("magnetic"), InvalidParameter);
}

TEST_CASE("trajectory sampling contract") {
  const TrapDrive d = guide_at_q(0.3);
  const auto traj = integrate(kNd, d, Environment(), State{{1e-5, 0, 0}, {}}, cfg_periods(5));
  REQUIRE(traj.status() == RunStatus::Completed);
  const double cap = d.period() / 200.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    CHECK(traj.samples[i].t - traj.samples[i - 1].t <= cap * (1.0 + 1e-12));
  }
  CHECK(traj.samples.back().t == doctest::Approx(5.0 * d.period()).epsilon(1e-14));
}

TEST_CASE("neutral particle flies straight") {
  const Particle neutral(37.5e-9, 3500.0);
  const TrapDrive d = guide_at_q(0.3);
  const State s0{{1e-4, -2e-4, 3e-5}, {0.02, 0.01, -0.03}};
  const auto traj = integrate(neutral, d, Environment(), s0, cfg_periods(20));
  REQUIRE(traj.status() == RunStatus::Completed);
  for (const auto& s : traj.samples) {
    const Vec3 expect = s0.position + s0.velocity * s.t;
    CHECK(oracle::rel_err(s.position, expect) < 1e-9);
    CHECK(norm(s.velocity) == norm(s0.velocity));
  }
}

TEST_CASE("gravity gives a parabola and conserves energy") {
  const Particle neutral(37.5e-9, 3500.0);
  const TrapDrive d = guide_at_q(0.3);
  Environment env(0.0, 0.0, true);
  SimConfig c = cfg_periods(50);  // 50 periods × 200 steps = 10⁴ steps
  c.forces = {Force::Gravity};
  const State s0{{0, 0, 0}, {0.0, 0.0, 0.5}};
  const auto traj = integrate(neutral, d, env, s0, c);
  REQUIRE(traj.status() == RunStatus::Completed);
  CHECK(traj.summary.accepted_steps >= 10000);
  const double g = 9.80665;
  const double e0 = mechanical_energy(neutral, d, env, c.forces, traj.samples.front());
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const double z = 0.5 * s.t - 0.5 * g * s.t * s.t;
    CHECK(oracle::rel_err(s.position.z, z) < 1e-9);
    worst = std::max(worst, oracle::rel_err(mechanical_energy(neutral, d, env, c.forces, s), e0));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("small-q trajectory follows the analytic solution") {
  const double q = 0.1;
  const TrapDrive d = guide_at_q(q);
  const auto mp = mathieu_params(kNd, d);
  const double x0 = 1e-5;
  const auto sol = make_secular_solution(mp, {x0, 0.0, 0.0});
  const Vec3 r_init = analytic_solution(sol, 0.0);
  const auto traj = integrate(kNd, d, Environment(), State{r_init, analytic_velocity(sol, 0.0)},
                              cfg_periods(20));
  double sum = 0.0, span = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i];
    const double dt = a.t - traj.samples[i - 1].t;
    const double dx = a.position.x - analytic_solution(sol, a.t).x;
    sum += dx * dx * dt;
    span += dt;
  }
  CHECK(std::sqrt(sum / span) / x0 < 0.05);
}

TEST_CASE("matches an independent fixed-step integrator") {
  const TrapDrive d = guide_at_q(0.6);
  const double k = kNd.charge() * d.rf_amplitude() / (kNd.mass() * d.length_scale() * d.length_scale());
  SimConfig c = cfg_periods(30);
  c.tolerance = 1e-11;
  const auto traj = integrate(kNd, d, Environment(), State{{2e-5, 0, 0}, {}}, c);
  const auto ref = oracle::mathieu_rk4(k, d.omega(), 2e-5, 0.0, 30.0 * d.period(), 30 * 4000);
  CHECK(oracle::rel_err(traj.samples.back().position.x, ref.back()[1]) < 1e-6);
}

TEST_CASE("micromotion ratio") {
  for (double q : {0.1, 0.2, 0.3}) {
    const TrapDrive d = guide_at_q(q);
    const auto traj =
        integrate(kNd, d, Environment(), State{{1e-5, 0, 0}, {}}, cfg_periods(200));
    const double w = zero_crossing_frequency(traj.samples, 0);
    const double ratio = oracle::micromotion_ratio(traj.samples, w, d.omega());
    CHECK(oracle::rel_err(ratio, q / 2.0) < 0.1);
  }
}

TEST_CASE("period-averaged energy stays bounded without damping") {
  const TrapDrive d = guide_at_q(0.3);
  const auto traj = integrate(kNd, d, Environment(), State{{1e-5, 0, 0}, {}}, cfg_periods(300));
  REQUIRE(traj.status() == RunStatus::Completed);
  // Average over blocks of whole secular and drive periods.
  std::vector<double> block;
  const double T = d.period();
  const double block_len = 100.0 * T;
  double acc = 0.0, span = 0.0, edge = block_len;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const double dt = s.t - traj.samples[i - 1].t;
    acc += mechanical_energy(kNd, d, Environment(), {Force::Coulomb}, s) * dt;
    span += dt;
    if (s.t >= edge * (1 - 1e-12)) {
      block.push_back(acc / span);
      acc = span = 0.0;
      edge += block_len;
    }
  }
  REQUIRE(block.size() == 3);
  for (std::size_t i = 1; i < block.size(); ++i) {
    CHECK(std::abs(block[i] - block[i - 1]) / std::abs(block[0]) < 0.05);
  }
}

TEST_CASE("damping makes the secular amplitude decay") {
  const TrapDrive d = guide_at_q(0.3);
  const double w = secular_frequency(mathieu_params(kNd, d), 0);
  const Environment env(0.0, 0.1 * w);
  SimConfig c = cfg_periods(120);
  c.forces = {Force::Coulomb, Force::Damping};
  const auto traj = integrate(kNd, d, env, State{{1e-5, 0, 0}, {}}, c);
  const double Ts = 2.0 * kPi / w;
  std::vector<double> rms;
  double acc = 0.0, span = 0.0, edge = Ts;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const double dt = s.t - traj.samples[i - 1].t;
    acc += s.position.x * s.position.x * dt;
    span += dt;
    if (s.t >= edge) {
      rms.push_back(std::sqrt(acc / span));
      acc = span = 0.0;
      edge += Ts;
    }
  }
  REQUIRE(rms.size() >= 8);
  for (std::size_t i = 1; i < rms.size(); ++i) CHECK(rms[i] < rms[i - 1]);
}

TEST_CASE("halving the tolerance stays within the error estimate") {
  const TrapDrive d = guide_at_q(0.5);
  SimConfig c = cfg_periods(20);
  c.tolerance = 1e-7;
  const State s0{{1e-5, 3e-6, 0}, {0.0, 1e-3, 0}};
  const auto coarse = propagate(kNd, d, Environment(), s0, c, nullptr);
  Trajectory t1 = integrate(kNd, d, Environment(), s0, c);
  c.tolerance *= 0.5;
  Trajectory t2 = integrate(kNd, d, Environment(), s0, c);
  const double diff = norm(t1.samples.back().position - t2.samples.back().position);
  CHECK(diff <= t1.summary.error_estimate);
  CHECK(coarse.accepted_steps == t1.summary.accepted_steps);
}

TEST_CASE("escape is reported") {
  const TrapDrive d = guide_at_q(1.5);
  SimConfig c = cfg_periods(200);
  c.escape_factor = 1.0;
  const auto traj = integrate(kNd, d, Environment(), State{{1e-5, 0, 0}, {}}, c);
  CHECK(traj.status() == RunStatus::Escaped);
  CHECK(traj.summary.max_radius > d.length_scale());
}

TEST_CASE("guide and ring x axes agree") {
  const auto g = integrate(kNd, guide_at_q(0.4), Environment(), State{{1e-5, 0, 0}, {}},
                           cfg_periods(10));
  const auto r = integrate(kNd, guide_at_q(0.4, Topology::Ring3D), Environment(),
                           State{{1e-5, 0, 0}, {}}, cfg_periods(10));
  REQUIRE(g.samples.size() == r.samples.size());
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    CHECK(g.samples[i].position.x == r.samples[i].position.x);
  }
}

TEST_CASE("thermal initial state") {
  const Particle nd(37.5e-9, 3500.0);
  const double w = 2.0 * kPi * 150.0;
  const State zero = sample_thermal_state(nd, Environment(0.0), w, 7);
  CHECK(zero.position == Vec3{});
  CHECK(zero.velocity == Vec3{});

  const Environment room(300.0);
  const State a = sample_thermal_state(nd, room, w, 99);
  const State b = sample_thermal_state(nd, room, w, 99);
  CHECK(a.position == b.position);
  CHECK(a.velocity == b.velocity);
  CHECK_FALSE(sample_thermal_state(nd, room, w, 100).position == a.position);

  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const State s = sample_thermal_state(nd, room, w, static_cast<std::uint64_t>(i));
    sum += s.position.x * s.position.x + s.position.y * s.position.y;
  }
  const double closed = std::sqrt(4.0 * 1.380649e-23 * 300.0 / (nd.mass() * w * w)) / std::sqrt(2.0);
  CHECK(oracle::rel_err(std::sqrt(sum / n), closed) < 0.03);
  CHECK_THROWS_AS(sample_thermal_state(nd, room, 0.0, 1), DomainError);
}

TEST_CASE("zero-crossing frequency") {
  std::vector<Sample> s;
  for (int i = 0; i <= 10000; ++i) {
    const double t = 1e-4 * i;
    s.push_back({t, {std::sin(37.0 * t + 0.3), 0, 0}, {}});
  }
  CHECK(zero_crossing_frequency(s, 0) == doctest::Approx(37.0).epsilon(1e-6));
  CHECK(std::isnan(zero_crossing_frequency(s, 1)) == true);
}

TEST_CASE("brute-force stability boundary") {
  const TrapDrive g = guide_at_q(0.1);
  const SimConfig c = cfg_periods(300);
  const auto est = bruteforce_q_critical(kNd, g, c);
  CHECK(est.width() <= 0.01);
  CHECK(est.q_low <= 0.908);
  CHECK(est.q_high >= 0.908);
  CHECK(est.q_low >= 0.89);
  CHECK(est.q_high <= 0.93);
  CHECK_FALSE(est.low_confidence);
  CHECK(is_bounded_run(kNd, g.with_rf_amplitude(est.v_low), c));
  CHECK_FALSE(is_bounded_run(kNd, g.with_rf_amplitude(est.v_high), c));

  const auto ring = bruteforce_q_critical(kNd, guide_at_q(0.1, Topology::Ring3D), c);
  CHECK(ring.q_low == est.q_low);
  CHECK(ring.q_high == est.q_high);
}

TEST_CASE("short brute-force runs give a wide low-confidence bracket") {
  const TrapDrive g = guide_at_q(0.1);
  {
    BruteforceOptions opts;
    opts.q_upper = 2.0;
    const auto quick = bruteforce_q_critical(kNd, g, cfg_periods(10), opts);
    CHECK(quick.low_confidence);
    CHECK(quick.width() > 0.01);
    CHECK(quick.width() <= 0.01 * 30.0);
  }
}

TEST_CASE("brute-force preconditions") {
  const TrapDrive g = guide_at_q(0.1);
  const SimConfig c = cfg_periods(300);
  {
    CHECK_THROWS_AS(bruteforce_q_critical(Particle(37.5e-9, 3500.0), g, c), DomainError);
    CHECK_THROWS_AS(bruteforce_q_critical(kNd, g.with_dc_voltage(1.0), c), DomainError);
    BruteforceOptions opts;
    opts.q_upper = 0.5;
    CHECK_THROWS_AS(bruteforce_q_critical(kNd, g, cfg_periods(20), opts), ConvergenceError);
    opts = BruteforceOptions{};
    opts.max_bisections = 2;
    CHECK_THROWS_AS(bruteforce_q_critical(kNd, g, cfg_periods(20), opts), ConvergenceError);
  }
}
