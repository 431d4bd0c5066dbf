#pragma once

#include <array>

#include "polytherm/constitutive.hpp"

namespace polytherm {

inline constexpr int kAugDim = 23;  // 19 minors + 3 velocity + 1 temperature/energy

/// State U = (xi, v, theta) of the augmented first-order system.
struct AugmentedState {
  MinorsVector xi;
  Vec3 v{};
  double theta = 1.0;

  std::array<double, kAugDim> flat() const {
    std::array<double, kAugDim> out;
    for (int b = 0; b < kMinorsDim; ++b) out[static_cast<std::size_t>(b)] = xi.component(b);
    out[19] = v[0];
    out[20] = v[1];
    out[21] = v[2];
    out[22] = theta;
    return out;
  }
  static AugmentedState from_flat(const std::array<double, kAugDim>& u) {
    AugmentedState s;
    for (int b = 0; b < kMinorsDim; ++b) s.xi.set_component(b, u[static_cast<std::size_t>(b)]);
    s.v = {u[19], u[20], u[21]};
    s.theta = u[22];
    return s;
  }
};

/// Conserved vector V = A(U) = (xi, v, 1/2|v|^2 + e(xi, theta)).
struct ConservedVector {
  MinorsVector xi;
  Vec3 v{};
  double energy = 0.0;

  std::array<double, kAugDim> flat() const {
    std::array<double, kAugDim> out;
    for (int b = 0; b < kMinorsDim; ++b) out[static_cast<std::size_t>(b)] = xi.component(b);
    out[19] = v[0];
    out[20] = v[1];
    out[21] = v[2];
    out[22] = energy;
    return out;
  }
};

/// Entropy multiplier G(U) = (1/theta)(psi_xi, v, -1).
struct Multiplier {
  std::array<double, kAugDim> g{};
};

ConservedVector conserved(const AugmentedState& u, const EnergyModel& model);

/// Flux f_alpha(U); needs the concrete deformation gradient F with
/// xi = Phi(F) to build dPhi/dF. Throws if xi and Phi(F) disagree beyond tol.
std::array<double, kAugDim> flux(const AugmentedState& u, const Matrix3& f,
                                 const EnergyModel& model, int alpha,
                                 double consistency_tol = 1e-8);

Multiplier multiplier(const AugmentedState& u, const EnergyModel& model);

/// Finite-difference residuals of the entropy-pair relations:
/// rH = |grad H - G . grad A| and rq = max_alpha |G . grad f_alpha| (q = 0).
/// States are perturbed through F (xi stays on the minors manifold).
struct EntropyPairResidual {
  double r_entropy = 0.0;
  double r_flux = 0.0;
};
EntropyPairResidual check_entropy_pair(const Matrix3& f, const Vec3& v, double theta,
                                       const EnergyModel& model, double step = 1e-5);

/// Solve e(xi, theta) = E - 1/2|v|^2 for theta by safeguarded
/// Newton/bisection on (theta_min, theta_max); monotone since e_theta > 0.
AugmentedState invert_conserved(const ConservedVector& v, const EnergyModel& model,
                                double theta_guess, double theta_max = 1e6,
                                int max_iter = 200, double tol = 1e-13);

/// Min eigenvalue of the finite-difference Hessian of
/// H~(V) = -eta(xi, theta(V)) at V; positive on convexity regions.
double symmetric_hessian_min_eig(const ConservedVector& v, const EnergyModel& model,
                                 double step = 1e-4);

}  // namespace polytherm
