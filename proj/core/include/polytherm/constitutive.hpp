#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "polytherm/minors.hpp"

namespace polytherm {

/// Polyconvex free energy
///   psi(xi, theta) = alpha2 |F|^2 + alpha4 |F|^4 + beta |Z|^2
///                  + delta_det sqrt(1 + w^2) + kappa theta w - c_th theta^2
/// with xi = (F, Z, w). The quartic term realizes growth exponent p = 4, the
/// sqrt keeps the determinant contribution linear at infinity, and the
/// -c_th theta^2 term gives ell = 2 with eta_theta = 2 c_th > 0.
struct EnergyModel {
  double alpha2 = 1.0;
  double alpha4 = 1.0;
  double beta = 1.0;
  double delta_det = 1.0;
  double kappa = 0.1;
  double c_th = 1.0;
  double p = 4.0;    // growth exponent in F
  double ell = 2.0;  // growth exponent in theta
  double theta_min = 1e-6;
  /// Replace delta_det*sqrt(1+w^2) by delta_det*w^2. Breaks the internal
  /// energy upper bound for p = 4 (energy ~ |F|^6 along dilation rays); kept
  /// as a counter-model for growth verification.
  bool det_quadratic = false;

  /// All coefficients strictly positive: uniformly convex in xi on compacts
  /// and theta-concave, the regime where the stability estimates apply.
  bool strictly_polyconvex() const {
    return alpha2 > 0.0 && alpha4 > 0.0 && beta > 0.0 && c_th > 0.0;
  }
  void validate() const;

  static EnergyModel defaults() { return EnergyModel{}; }
  /// alpha2 = 1/2, everything else off: Sigma(F, theta) = F.
  static EnergyModel quadratic() {
    EnergyModel m;
    m.alpha2 = 0.5;
    m.alpha4 = m.beta = m.delta_det = m.kappa = m.c_th = 0.0;
    return m;
  }
};

/// Pointwise constitutive evaluation: free energy, entropy, internal energy,
/// stress precursor and the full derivative stack.
struct ThermoEval {
  double psi = 0.0;
  double eta = 0.0;    // -psi_theta
  double e = 0.0;      // psi + theta * eta
  Matrix3 sigma;       // psi_xi . dPhi/dF at F = xi.f
  MinorsVector dpsi_dxi;
  std::array<double, kMinorsDim * kMinorsDim> d2psi_dxi2{};  // row-major symmetric
  double dpsi_dtheta = 0.0;
  MinorsVector d2psi_dxidtheta;
  double d2psi_dtheta2 = 0.0;
};

ThermoEval eval(const EnergyModel& model, const MinorsVector& xi, double theta);

/// Piola stress Sigma_{i alpha} = psi_xi(Phi(F), theta)^B dPhi^B/dF_{i alpha}.
Matrix3 stress(const EnergyModel& model, const Matrix3& f, double theta);

/// Fast paths used in inner loops (identical values to eval()).
double free_energy(const EnergyModel& model, const MinorsVector& xi, double theta);
double internal_energy(const EnergyModel& model, const MinorsVector& xi, double theta);
double entropy(const EnergyModel& model, const MinorsVector& xi, double theta);

/// Sampling region for growth-condition verification.
struct SampleRegion {
  double f_max = 2.0;
  double v_max = 1.0;
  double theta_lo = 0.5;
  double theta_hi = 2.0;
  int samples = 2000;
  std::uint64_t seed = 42;
};

struct GrowthCondition {
  std::string name;
  double inf_ratio = 0.0;
  double sup_ratio = 0.0;
  bool pass = false;
  std::string note;
};

/// Empirical verification of the growth conditions on a compact region plus
/// structured rays to large |F| and theta. Ratios are against |F|^p + theta^ell.
struct GrowthReport {
  SampleRegion region;
  double ray_scale = 1e3;
  std::vector<GrowthCondition> conditions;
  bool all_pass() const;
  std::string summary() const;
};

GrowthReport check_growth(const EnergyModel& model, const SampleRegion& region,
                          double ray_scale = 1e3);

/// Minimum eigenvalue of the 19x19 xi-Hessian at (xi, theta).
double hessian_min_eig(const EnergyModel& model, const MinorsVector& xi, double theta);

}  // namespace polytherm
