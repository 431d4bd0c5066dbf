#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "polytherm/grid.hpp"

using namespace polytherm;

namespace {

PeriodicField random_field(const Grid& g, int comps, std::uint64_t seed) {
  PeriodicField f(g, comps);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : f.values()) v = u(rng);
  return f;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("grid validation rejects 2- and 3-node axes, allows collapsed ones") {
  CHECK_THROWS_AS(Grid(3), std::invalid_argument);
  CHECK_THROWS_AS(Grid(8, 2, 8), std::invalid_argument);
  CHECK_NOTHROW(Grid(8, 1, 1));
  const Grid g(8, 1, 1);
  CHECK(g.num_nodes() == 8);
  CHECK(g.h_min() == doctest::Approx(0.125));
  CHECK(g.cell_volume() == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("centered derivative of a trig mode has the modified wavenumber") {
  const int n = 32;
  const double h = 1.0 / n;
  const int k = 3;
  PeriodicField f(Grid(n), 1);
  f.fill([&](const Vec3& x, int) { return std::sin(2.0 * M_PI * k * x[0]); });
  const PeriodicField df = deriv(f, 0);
  // The exact discrete eigenvalue of the centered stencil on this mode.
  const double ktilde = std::sin(2.0 * M_PI * k * h) / h;
  const Grid g = f.grid();
  for (int i = 0; i < n; ++i) {
    const double x = i * h;
    CHECK(df.at(i, 0, 0, 0) ==
          doctest::Approx(ktilde * std::cos(2.0 * M_PI * k * x)).epsilon(1e-12).scale(1.0));
  }
  (void)g;
}

TEST_CASE("gradient converges at second order") {
  auto err_at = [](int n) {
    PeriodicField f(Grid(n), 1);
    f.fill([](const Vec3& x, int) { return std::sin(2.0 * M_PI * (x[0] + 2.0 * x[1])); });
    const PeriodicField df = grad(f);
    double worst = 0.0;
    const Grid g = f.grid();
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3) {
          const Vec3 x = g.coords(i1, i2, i3);
          const double c = std::cos(2.0 * M_PI * (x[0] + 2.0 * x[1]));
          const double exact[3] = {2.0 * M_PI * c, 4.0 * M_PI * c, 0.0};
          for (int a = 0; a < 3; ++a)
            worst = std::max(worst, std::abs(df.at(i1, i2, i3, a) - exact[a]));
        }
    return worst;
  };
  CHECK(std::log2(err_at(16) / err_at(32)) >= 1.9);
}

TEST_CASE("div is the negative adjoint of grad") {
  const Grid g(8, 8, 4);
  const PeriodicField u = random_field(g, 2, 101);
  const PeriodicField w = random_field(g, 6, 102);
  const double lhs = inner(grad(u), w);
  const double rhs = -inner(u, div(w));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
}

TEST_CASE("collapsed axes contribute zero derivatives") {
  const Grid g(16, 1, 1);
  PeriodicField f(g, 1);
  f.fill([](const Vec3& x, int) { return std::cos(2.0 * M_PI * x[0]); });
  CHECK(max_abs(deriv(f, 1)) == 0.0);
  CHECK(max_abs(deriv(f, 2)) == 0.0);
  CHECK(max_abs(deriv(f, 0)) > 1.0);
}

TEST_CASE("curl constraint residual vanishes on discrete gradients") {
  const Grid g(12);
  PeriodicField u = random_field(g, 3, 103);
  // grad u is a 9-component field whose discrete curl is exactly zero
  // because centered derivatives commute.
  CHECK(curl_constraint_residual(grad(u)) <= 1e-12);

  PeriodicField f = random_field(g, 9, 104);
  CHECK(curl_constraint_residual(f) > 1e-3);
}

TEST_CASE("mollifier preserves mass and reduces oscillation") {
  const Grid g(32);
  PeriodicField f(g, 1);
  f.fill([](const Vec3& x, int) {
    return 1.0 + std::sin(2.0 * M_PI * 8.0 * x[0]) * std::cos(2.0 * M_PI * 8.0 * x[1]);
  });
  const PeriodicField m = mollify(f, 0.125);
  const PeriodicField ones(g, 1, 1.0);
  CHECK(inner(m, ones) == doctest::Approx(inner(f, ones)).epsilon(1e-12));
  // High-frequency content must shrink; the mean is 1.
  double dev_f = 0.0, dev_m = 0.0;
  for (std::int64_t nidx = 0; nidx < g.num_nodes(); ++nidx) {
    dev_f = std::max(dev_f, std::abs(f.at(nidx, 0) - 1.0));
    dev_m = std::max(dev_m, std::abs(m.at(nidx, 0) - 1.0));
  }
  CHECK(dev_m < 0.5 * dev_f);
  CHECK_THROWS(mollify(f, 0.01));  // kernel narrower than 2h
}

TEST_CASE("lp norms on a constant field") {
  const Grid g(8);
  PeriodicField f(g, 2, 0.0);
  for (std::int64_t nidx = 0; nidx < g.num_nodes(); ++nidx) {
    f.at(nidx, 0) = 3.0;
    f.at(nidx, 1) = 4.0;
  }
  CHECK(lp_norm(f, 2.0) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(lp_norm(f, 4.0) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == doctest::Approx(5.0));
  CHECK(max_abs(f) == doctest::Approx(4.0));
}

TEST_CASE("pair_space quadrature of smooth periodic data is spectrally accurate") {
  const Grid g(24);
  PeriodicField f(g, 1);
  f.fill([](const Vec3& x, int) { return std::sin(2.0 * M_PI * x[0]); });
  // phi = sin(2 pi x); the pairing is the integral of sin^2, exactly 1/2.
  const TestFunction phi = TestFunction::trig_mode({1, 0, 0}, 0.0, 1.0);
  CHECK(pair_space(f, {1.0}, phi, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("space-time pairing is trapezoidal in time") {
  const Grid g(8);
  std::vector<PeriodicField> snaps;
  std::vector<double> times = {0.0, 0.5, 1.0};
  for (double t : times) {
    PeriodicField f(g, 1, t * t);  // spatially constant, quadratic in time
    snaps.push_back(f);
  }
  const TestFunction one = TestFunction::constant(1.0);
  // trapezoid of t^2 on {0, 1/2, 1} with uniform spacing: 3/8.
  CHECK(pair(snaps, times, {1.0}, one) == doctest::Approx(0.375).epsilon(1e-13));
}

TEST_CASE("test catalog functions have consistent analytic gradients") {
  const double h = 1e-6;
  for (const auto& phi : test_catalog()) {
    const Vec3 x{0.21, 0.47, 0.83};
    const double t = 0.3;
    const Vec3 gr = phi.gradient(x, t);
    for (int a = 0; a < 3; ++a) {
      Vec3 xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      const double fd = (phi.value(xp, t) - phi.value(xm, t)) / (2.0 * h);
      CHECK(gr[a] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
}

}  // TEST_SUITE
