#include <benchmark/benchmark.h>

#include "paultrap/dynamics.hpp"
#include "paultrap/fields.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/transport.hpp"

using namespace paultrap;

namespace {

constexpr double kPi = 3.14159265358979323846;

const Particle kNd(37.5e-9, 3500.0, elementary_charges(20));

TrapDrive drive_at(double q) {
  const TrapDrive base(Topology::Guide2D, 2.35e-3, 0.0, 1.0, 2.0 * kPi * 2000.0);
  return base.with_rf_amplitude(rf_amplitude_for_q(kNd, base, q));
}

void BM_FieldAt(benchmark::State& state) {
  const TrapDrive d(Topology::Ring3D, 1.2e-3, 0.0, 400.0, 2.0 * kPi * 2e3);
  Vec3 r{1e-4, 2e-4, -1e-4};
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field_at(r, t, d));
    t += 1e-7;
  }
}
BENCHMARK(BM_FieldAt);

void BM_DepForce(benchmark::State& state) {
  const TrapDrive d(Topology::Ring3D, 1.2e-3, 0.0, 400.0, 2.0 * kPi * 2e3);
  const Environment env;
  const Vec3 r{1e-4, 2e-4, -1e-4};
  for (auto _ : state) benchmark::DoNotOptimize(dep_force(r, kNd, env, d));
}
BENCHMARK(BM_DepForce);

void BM_Integrate(benchmark::State& state) {
  const TrapDrive d = drive_at(0.3);
  SimConfig cfg;
  cfg.periods = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(kNd, d, Environment(), State{{1e-5, 0, 0}, {}}, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_Integrate)->Arg(20)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_BoundedRun(benchmark::State& state) {
  const TrapDrive d = drive_at(0.905);
  SimConfig cfg;
  cfg.periods = 300.0;
  for (auto _ : state) benchmark::DoNotOptimize(is_bounded_run(kNd, d, cfg));
}
BENCHMARK(BM_BoundedRun)->Unit(benchmark::kMillisecond);

void BM_OperatingWindow(benchmark::State& state) {
  SweepSpec spec;
  for (int i = 0; i < 100; ++i) spec.rf_amplitudes.push_back(0.1 + 0.05 * i);
  for (int j = 0; j < 100; ++j) spec.drive_omegas.push_back(2.0 * kPi * (500.0 + 50.0 * j));
  const Particle p(37.5e-9, 3500.0, elementary_charges(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(operating_window(p, Environment(300.0), GuideGeometry(), spec));
  }
}
BENCHMARK(BM_OperatingWindow)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
