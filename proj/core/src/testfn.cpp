#include "polytherm/testfn.hpp"

#include <cmath>

namespace polytherm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TestFunction TestFunction::trig_mode(const std::array<int, 3>& k, double phase, double amp,
                                     bool time_modulated) {
  TestFunction fn;
  fn.name = "trig_" + std::to_string(k[0]) + std::to_string(k[1]) + std::to_string(k[2]);
  auto tw = [time_modulated](double t) { return time_modulated ? 1.0 + 0.5 * std::sin(kTwoPi * t) : 1.0; };
  auto twdot = [time_modulated](double t) {
    return time_modulated ? 0.5 * kTwoPi * std::cos(kTwoPi * t) : 0.0;
  };
  fn.value = [k, phase, amp, tw](const Vec3& x, double t) {
    return amp * std::sin(kTwoPi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) + phase) * tw(t);
  };
  fn.gradient = [k, phase, amp, tw](const Vec3& x, double t) -> Vec3 {
    const double c = amp * kTwoPi * std::cos(kTwoPi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) + phase) * tw(t);
    return {c * k[0], c * k[1], c * k[2]};
  };
  fn.dt = [k, phase, amp, twdot](const Vec3& x, double t) {
    return amp * std::sin(kTwoPi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) + phase) * twdot(t);
  };
  return fn;
}

TestFunction TestFunction::periodized_gaussian(const Vec3& x0, double sigma) {
  TestFunction fn;
  fn.name = "pgauss";
  // sum over nearest periodic images; sigma << 1 so 3 images per axis suffice
  auto val1d = [sigma](double d) {
    double s = 0.0;
    for (int m = -2; m <= 2; ++m) {
      const double u = d + m;
      s += std::exp(-0.5 * u * u / (sigma * sigma));
    }
    return s;
  };
  auto dval1d = [sigma](double d) {
    double s = 0.0;
    for (int m = -2; m <= 2; ++m) {
      const double u = d + m;
      s += -u / (sigma * sigma) * std::exp(-0.5 * u * u / (sigma * sigma));
    }
    return s;
  };
  fn.value = [x0, val1d](const Vec3& x, double) {
    return val1d(x[0] - x0[0]) * val1d(x[1] - x0[1]) * val1d(x[2] - x0[2]);
  };
  fn.gradient = [x0, val1d, dval1d](const Vec3& x, double) -> Vec3 {
    const double g0 = val1d(x[0] - x0[0]), g1 = val1d(x[1] - x0[1]), g2 = val1d(x[2] - x0[2]);
    return {dval1d(x[0] - x0[0]) * g1 * g2, g0 * dval1d(x[1] - x0[1]) * g2,
            g0 * g1 * dval1d(x[2] - x0[2])};
  };
  fn.dt = [](const Vec3&, double) { return 0.0; };
  return fn;
}

TestFunction TestFunction::constant(double c) {
  TestFunction fn;
  fn.name = "const";
  fn.value = [c](const Vec3&, double) { return c; };
  fn.gradient = [](const Vec3&, double) -> Vec3 { return {0.0, 0.0, 0.0}; };
  fn.dt = [](const Vec3&, double) { return 0.0; };
  return fn;
}

const std::vector<TestFunction>& test_catalog() {
  static const std::vector<TestFunction> catalog = [] {
    std::vector<TestFunction> c;
    c.push_back(TestFunction::constant(1.0));
    c.push_back(TestFunction::trig_mode({1, 0, 0}, 0.0, 1.0));
    c.push_back(TestFunction::trig_mode({0, 1, 0}, 0.0, 1.0));
    c.push_back(TestFunction::trig_mode({0, 0, 1}, 0.0, 1.0));
    c.push_back(TestFunction::trig_mode({1, 0, 0}, 1.5707963267948966, 1.0));  // cos mode
    c.push_back(TestFunction::trig_mode({1, 1, 0}, 0.3, 0.7));
    c.push_back(TestFunction::trig_mode({0, 1, 1}, 0.9, 0.7));
    c.push_back(TestFunction::trig_mode({1, 1, 1}, 0.0, 0.5));
    c.push_back(TestFunction::trig_mode({2, 0, 0}, 0.0, 1.0));
    c.push_back(TestFunction::trig_mode({1, 0, 0}, 0.0, 1.0, /*time_modulated=*/true));
    c.push_back(TestFunction::periodized_gaussian({0.5, 0.5, 0.5}, 0.12));
    c.push_back(TestFunction::periodized_gaussian({0.25, 0.5, 0.75}, 0.1));
    return c;
  }();
  return catalog;
}

}  // namespace polytherm
