#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polytherm/constitutive.hpp"
#include "polytherm/solver.hpp"

namespace polytherm {

/// Compact reference region: |F| <= m, |v| <= m, delta <= theta <= m.
struct RegionGamma {
  double m = 2.0;
  double delta = 0.5;

  void validate() const {
    if (!(delta > 0.0) || !(delta <= m)) throw std::invalid_argument("need 0 < delta <= m");
  }
};

/// First-order Taylor remainder of psi in (xi, theta) about the barred state.
double rel_psi(const MinorsVector& xi, double theta, const MinorsVector& xi_bar,
               double theta_bar, const EnergyModel& model);

/// Same remainder structure for eta and for psi_xi.
double rel_eta(const MinorsVector& xi, double theta, const MinorsVector& xi_bar,
               double theta_bar, const EnergyModel& model);
MinorsVector rel_psi_xi(const MinorsVector& xi, double theta, const MinorsVector& xi_bar,
                        double theta_bar, const EnergyModel& model);

/// Relative entropy
///   I = rel_psi + (eta(xi,theta) - eta(xi_bar,theta_bar))(theta - theta_bar)
///     + 1/2 |v - v_bar|^2
/// with xi = Phi(F), xi_bar = Phi(F_bar).
double rel_entropy_I(const Matrix3& f, const Vec3& v, double theta, const Matrix3& f_bar,
                     const Vec3& v_bar, double theta_bar, const EnergyModel& model);

/// Grid quadrature of the pointwise I between two (F, v, theta) field triples.
/// F fields have 9 components (layout i*3 + alpha), v 3, theta 1.
double integrated_I(const PeriodicField& f, const PeriodicField& v, const PeriodicField& theta,
                    const PeriodicField& f_bar, const PeriodicField& v_bar,
                    const PeriodicField& theta_bar, const EnergyModel& model);

/// Empirical constants for one sampled bound: the extremal ratio together
/// with how much it moved when the sample count doubled.
struct BoundEstimate {
  std::string name;
  double value = 0.0;
  double value_half_samples = 0.0;  // same estimate from the first half
  bool pass = false;

  double drift() const {
    // a supremum of an identically vanishing quantity is stable by definition
    if (std::max(std::abs(value), std::abs(value_half_samples)) <= 1e-12) return 0.0;
    return std::abs(value - value_half_samples) / std::max(std::abs(value), 1e-300);
  }
};

struct BoundReport {
  RegionGamma region;
  double r_split = 0.0;  // the region-splitting level R
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<BoundEstimate> estimates;
  long exclusions = 0;  // samples dropped inside the coincidence radius

  bool all_pass() const;
  const BoundEstimate& get(const std::string& name) const;
};

/// Two-region coercivity of I: inf I/(|F|^p + theta^ell + |v|^2) over the
/// outer region and inf I/(|Phi(F)-Phi(Fbar)|^2 + |theta-thetabar|^2 +
/// |v-vbar|^2) over the inner one. Both infima must be positive.
BoundReport lemma1_check(const EnergyModel& model, const RegionGamma& region, double r_split,
                         int samples, std::uint64_t seed);

/// Suprema of the four first-order bounds against I (empirical C1..C4) plus
/// the difference-coercivity constants K1', K2'.
BoundReport lemma2_check(const EnergyModel& model, const RegionGamma& region, double r_split,
                         int samples, std::uint64_t seed);

/// Heat-supply bound: sup |r (1/theta - 1/theta_bar)(theta - theta_bar)| / I
/// over samples with theta >= theta_support_floor (empirical C5).
BoundReport lemma3_check(const EnergyModel& model, const RegionGamma& region, double r_bound,
                         double theta_support_floor, int samples, std::uint64_t seed);

struct RelEntropyReport {
  std::vector<double> times;
  std::vector<double> integrated;  // integral of I at each snapshot
  double c1 = 1.0;                 // fitted envelope I(t) <= c1 exp(c2 t) I(0)
  double c2 = 0.0;
  double slack = 0.0;              // worst multiplicative envelope violation before inflation
  bool envelope_pass = false;
};

/// Least-squares exponential envelope through the integrated-I series.
RelEntropyReport gronwall_fit(const std::vector<double>& times,
                              const std::vector<double>& integrated, double slack_tol = 0.05);

struct WeakStrongOptions {
  double perturb_amplitude = 0.0;  // initial-velocity perturbation of the candidate
  double mu0 = 0.0;                // candidate dissipation (reference is inviscid)
  double k0 = 0.0;
  double slack_tol = 0.05;
};

/// Reference = inviscid run of cfg; candidate = same data with perturbed
/// initial velocity and/or small dissipation. Returns the integrated-I series
/// between them with the fitted Gronwall envelope.
RelEntropyReport weak_strong_experiment(const SolverConfig& cfg, const InitialData& init,
                                        const WeakStrongOptions& opt);

}  // namespace polytherm
