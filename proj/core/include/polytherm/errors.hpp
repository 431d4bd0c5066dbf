#pragma once

#include <stdexcept>
#include <string>

namespace polytherm {

/// Malformed or inconsistent experiment configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during time integration (CLI exit code 3).
struct NumericalError : std::runtime_error {
  enum class Kind { cfl, theta_floor, coefficient_bound, energy_bound };
  Kind kind;
  NumericalError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

/// The reference run lost the Lipschitz bound required of a strong solution
/// surrogate (CLI exit code 4).
struct LipschitzError : std::runtime_error {
  explicit LipschitzError(const std::string& what) : std::runtime_error(what) {}
};

/// A sampling region produced no admissible points (CLI exit code 5).
struct SamplingError : std::runtime_error {
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polytherm
