#include <benchmark/benchmark.h>

#include <cmath>

#include "polytherm/solver.hpp"

namespace {

using namespace polytherm;

InitialData smooth_pulse() {
  InitialData d;
  d.displacement = [](const Vec3& x) -> Vec3 {
    return {0.02 * std::sin(2.0 * M_PI * x[0]), 0.0, 0.0};
  };
  d.velocity = [](const Vec3& x) -> Vec3 {
    return {0.0, 0.05 * std::sin(2.0 * M_PI * x[1]), 0.0};
  };
  d.temperature = [](const Vec3&) { return 1.0; };
  return d;
}

void bm_rhs(benchmark::State& state) {
  SolverConfig cfg;
  cfg.grid = Grid(static_cast<int>(state.range(0)));
  cfg.coeff.mu0 = 1e-3;
  cfg.coeff.k0 = 1e-3;
  const SimState s = make_state(cfg, smooth_pulse());
  for (auto _ : state) benchmark::DoNotOptimize(rhs(s, cfg));
}
BENCHMARK(bm_rhs)->Arg(8)->Arg(16);

void bm_step(benchmark::State& state) {
  SolverConfig cfg;
  cfg.grid = Grid(8);
  SimState s = make_state(cfg, smooth_pulse());
  const double dt = 0.5 * stable_dt(s, cfg);
  for (auto _ : state) {
    s = step(s, cfg, dt);
    benchmark::DoNotOptimize(s.t);
  }
}
BENCHMARK(bm_step);

}  // namespace
