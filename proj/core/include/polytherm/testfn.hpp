#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polytherm/matrix3.hpp"

namespace polytherm {

/// Smooth periodic scalar test function of (x, t) with analytic space and
/// time derivatives. Tensor-valued test fields are built by callers as
/// phi(x,t) times a constant component-weight array.
struct TestFunction {
  std::string name;
  std::function<double(const Vec3&, double)> value;
  std::function<Vec3(const Vec3&, double)> gradient;
  std::function<double(const Vec3&, double)> dt;

  /// Trigonometric mode  amp * trig(2 pi k.x + phase) * (time profile).
  static TestFunction trig_mode(const std::array<int, 3>& k, double phase, double amp,
                                bool time_modulated = false);
  /// Periodized Gaussian bump centered at x0 with width sigma.
  static TestFunction periodized_gaussian(const Vec3& x0, double sigma);
  static TestFunction constant(double c);
};

/// The fixed catalog used by the weak-limit and pairing experiments.
const std::vector<TestFunction>& test_catalog();

}  // namespace polytherm
