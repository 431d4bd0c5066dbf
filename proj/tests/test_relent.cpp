#include <cmath>
#include <random>

#include "doctest.h"
#include "polytherm/relent.hpp"

using namespace polytherm;

namespace {

Matrix3 random_near_identity(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix3 m = Matrix3::identity();
  for (auto& a : m.a) a += u(rng);
  return m;
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_SUITE("relent") {

TEST_CASE("relative entropy vanishes exactly on the diagonal") {
  std::mt19937_64 rng(103);
  const EnergyModel m = EnergyModel::defaults();
  for (int s = 0; s < 200; ++s) {
    const Matrix3 f = random_near_identity(rng, 0.4);
    const Vec3 v = random_vec(rng, 1.0);
    const double theta = 0.4 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(rel_entropy_I(f, v, theta, f, v, theta, m) == 0.0);
  }
}

TEST_CASE("velocity-only relative entropy is exactly the kinetic distance") {
  std::mt19937_64 rng(107);
  const EnergyModel m = EnergyModel::defaults();
  for (int s = 0; s < 100; ++s) {
    const Matrix3 f = random_near_identity(rng, 0.3);
    const Vec3 v = random_vec(rng, 1.0);
    const Vec3 vb = random_vec(rng, 1.0);
    const double theta = 1.2;
    const Vec3 dv{v[0] - vb[0], v[1] - vb[1], v[2] - vb[2]};
    const double kin = 0.5 * (dv[0] * dv[0] + dv[1] * dv[1] + dv[2] * dv[2]);
    CHECK(rel_entropy_I(f, v, theta, f, vb, theta, m) == doctest::Approx(kin).epsilon(1e-14));
  }
}

TEST_CASE("thermal-only relative entropy has the closed form c_th (theta - theta_bar)^2") {
  // For the default model the kappa terms of the Taylor remainder cancel and
  // eta is linear in theta, so I reduces to the quadratic thermal distance.
  std::mt19937_64 rng(109);
  const EnergyModel m = EnergyModel::defaults();
  for (int s = 0; s < 100; ++s) {
    const Matrix3 f = random_near_identity(rng, 0.3);
    const Vec3 v = random_vec(rng, 0.5);
    const double th = 0.4 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double thb = 0.4 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double dth = th - thb;
    CHECK(rel_entropy_I(f, v, th, f, v, thb, m) ==
          doctest::Approx(m.c_th * dth * dth).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("quadratic model reduces rel_psi to half the squared minors distance in F") {
  std::mt19937_64 rng(113);
  const EnergyModel m = EnergyModel::quadratic();
  const MinorsVector xi = minors_vector(random_near_identity(rng, 0.4));
  const MinorsVector xib = minors_vector(random_near_identity(rng, 0.4));
  const Matrix3 df = xi.f - xib.f;
  CHECK(rel_psi(xi, 1.0, xib, 1.0, m) ==
        doctest::Approx(0.5 * df.frobenius_sq()).epsilon(1e-12).scale(1.0));
}

TEST_CASE("relative entropy is positive off the diagonal") {
  std::mt19937_64 rng(127);
  const EnergyModel m = EnergyModel::defaults();
  for (int s = 0; s < 2000; ++s) {
    const Matrix3 f = random_near_identity(rng, 0.4);
    const Matrix3 fb = random_near_identity(rng, 0.4);
    const Vec3 v = random_vec(rng, 1.0);
    const Vec3 vb = random_vec(rng, 1.0);
    const double th = 0.5 + 1.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double thb = 0.5 + 1.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double i = rel_entropy_I(f, v, th, fb, vb, thb, m);
    CHECK(i >= 0.0);
  }
}

TEST_CASE("perturbations scale quadratically in the relative entropy") {
  const EnergyModel m = EnergyModel::defaults();
  std::mt19937_64 rng(131);
  const Matrix3 fb = random_near_identity(rng, 0.2);
  const Vec3 vb = random_vec(rng, 0.5);
  const double thb = 1.1;
  const Matrix3 df = random_near_identity(rng, 1.0) - Matrix3::identity();
  const Vec3 dv = random_vec(rng, 1.0);
  auto i_at = [&](double a) {
    Matrix3 f = fb;
    for (int k = 0; k < 9; ++k) f.a[static_cast<std::size_t>(k)] += a * df.a[static_cast<std::size_t>(k)];
    const Vec3 v{vb[0] + a * dv[0], vb[1] + a * dv[1], vb[2] + a * dv[2]};
    return rel_entropy_I(f, v, thb + 0.7 * a, fb, vb, thb, m);
  };
  const double expo = std::log10(i_at(1e-2) / i_at(1e-3));
  CHECK(expo == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("integrated relative entropy matches the pointwise closed form") {
  const Grid g(8);
  PeriodicField f(g, 9), fb(g, 9);
  auto ident = [](const Vec3&, int c) { return c % 4 == 0 ? 1.0 : 0.0; };
  f.fill(ident);
  fb.fill(ident);
  PeriodicField v(g, 3, 0.0), vb(g, 3, 0.0);
  PeriodicField th(g, 1, 1.3), thb(g, 1, 1.0);
  const EnergyModel m = EnergyModel::defaults();
  CHECK(integrated_I(f, v, th, fb, vb, thb, m) ==
        doctest::Approx(m.c_th * 0.09).epsilon(1e-12));
}

TEST_CASE("bound-estimate drift treats vanishing suprema as stable") {
  BoundEstimate b;
  b.value = 1e-15;
  b.value_half_samples = 3e-16;
  CHECK(b.drift() == 0.0);
  b.value = 2.0;
  b.value_half_samples = 1.0;
  CHECK(b.drift() == doctest::Approx(0.5));
}

TEST_CASE("lemma certificates pass on the primary region") {
  const EnergyModel m = EnergyModel::defaults();
  RegionGamma region;
  region.m = 1.0;
  region.delta = 0.5;
  const BoundReport l1 = lemma1_check(m, region, 16.0, 2000, 42);
  CHECK(l1.all_pass());
  CHECK(l1.get("K1").value > 0.0);
  CHECK(l1.get("K2").value > 0.0);
  const BoundReport l2 = lemma2_check(m, region, 16.0, 2000, 42);
  CHECK(l2.all_pass());
  // The certified <= 10% drift budget needs the full 10^4 samples and is
  // enforced by the acceptance gate; at this reduced budget just require
  // the estimates to be in the stable regime.
  for (const auto& est : l2.estimates) CHECK(est.drift() <= 0.25);
  CHECK_THROWS_AS(l2.get("no_such_bound"), std::out_of_range);
}

TEST_CASE("heat-supply bound attains the corner value r / (c_th theta_floor delta)") {
  const EnergyModel m = EnergyModel::defaults();
  RegionGamma region;
  region.m = 1.0;
  region.delta = 0.5;
  const BoundReport l3 = lemma3_check(m, region, 1.0, 0.1, 2000, 42);
  CHECK(l3.all_pass());
  CHECK(l3.get("C5").value == doctest::Approx(1.0 / (m.c_th * 0.1 * 0.5)).epsilon(1e-9));
  CHECK(l3.get("C5").drift() <= 0.10);
}

TEST_CASE("region validation rejects inadmissible temperature floors") {
  RegionGamma bad;
  bad.delta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.delta = 3.0;
  bad.m = 2.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("gronwall fit recovers a synthetic exponential envelope") {
  std::vector<double> times, vals;
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.1 * k;
    times.push_back(t);
    vals.push_back(3e-4 * std::exp(2.0 * t));
  }
  const RelEntropyReport rep = gronwall_fit(times, vals);
  CHECK(rep.envelope_pass);
  CHECK(rep.c2 == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rep.c1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.slack <= 1e-9);

  // A 20% bump above the trend must blow the 5% slack budget.
  std::vector<double> bumped = vals;
  bumped[5] *= 1.2;
  const RelEntropyReport rep2 = gronwall_fit(times, bumped);
  CHECK(rep2.slack > 0.05);
  CHECK_FALSE(rep2.envelope_pass);
}

TEST_CASE("weak-strong experiment produces a positive admissible envelope") {
  SolverConfig cfg;
  cfg.grid = Grid(8, 1, 1);
  cfg.t_end = 0.05;
  cfg.snapshot_stride = 2;
  InitialData init;
  init.displacement = [](const Vec3& x) -> Vec3 { return {0.01 * std::sin(2.0 * M_PI * x[0]), 0, 0}; };
  init.velocity = [](const Vec3& x) -> Vec3 { return {0.02 * std::sin(2.0 * M_PI * x[0]), 0, 0}; };
  init.temperature = [](const Vec3&) { return 1.0; };
  WeakStrongOptions opt;
  opt.perturb_amplitude = 1e-3;
  const RelEntropyReport rep = weak_strong_experiment(cfg, init, opt);
  REQUIRE(rep.times.size() >= 3);
  CHECK(rep.integrated.front() > 0.0);
  for (double i : rep.integrated) CHECK(i >= 0.0);
  CHECK(rep.envelope_pass);
}

}  // TEST_SUITE
