#include <benchmark/benchmark.h>

#include <random>

#include "polytherm/constitutive.hpp"
#include "polytherm/minors.hpp"

namespace {

using namespace polytherm;

Matrix3 random_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  Matrix3 m = Matrix3::identity();
  for (double& w : m.a) w += dist(rng);
  return m;
}

void bm_cofactor(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Matrix3 f = random_matrix(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cofactor(f));
}
BENCHMARK(bm_cofactor);

void bm_minors_jacobian(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Matrix3 f = random_matrix(rng);
  for (auto _ : state) benchmark::DoNotOptimize(minors_jacobian(f));
}
BENCHMARK(bm_minors_jacobian);

void bm_thermo_eval(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Matrix3 f = random_matrix(rng);
  const EnergyModel model = EnergyModel::defaults();
  const MinorsVector xi = minors_vector(f);
  for (auto _ : state) benchmark::DoNotOptimize(eval(model, xi, 1.3));
}
BENCHMARK(bm_thermo_eval);

}  // namespace
