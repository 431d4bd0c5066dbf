#pragma once

#include <array>
#include <functional>
#include <vector>

#include "polytherm/constitutive.hpp"
#include "polytherm/grid.hpp"
#include "polytherm/solver.hpp"

namespace polytherm {

/// Distributional residuals of the transport identities
///   d_t F = grad v,
///   d_t det F = div((cof F) v),
///   d_t (cof F)_{k gamma} = d_alpha(eps_{ijk} eps_{alpha beta gamma} F_{j beta} v_i),
/// evaluated from displacement snapshots (y = x + u) with central time
/// differences and the spatial derivative moved onto the test function. Each
/// entry is the max over components and interior time levels of the pairing
/// residual.
struct TransportResiduals {
  double f_eq = 0.0;
  double cof_eq = 0.0;
  double det_eq = 0.0;
};
TransportResiduals transport_identity_residual(const std::vector<PeriodicField>& u_snapshots,
                                               const std::vector<double>& times,
                                               const TestFunction& phi);

/// Same residuals for motions with an affine part, y = (I + B(t)) x + u(t).
/// The affine contributions to the fluxes cannot be moved onto the test
/// function (x is not periodic), so they are evaluated directly with discrete
/// derivatives of the periodic factors; B covers homogeneous deformations
/// such as uniform dilation.
TransportResiduals transport_identity_residual(const std::vector<PeriodicField>& u_snapshots,
                                               const std::vector<Matrix3>& backgrounds,
                                               const std::vector<double>& times,
                                               const TestFunction& phi);

enum class SequenceKind { constant, oscillatory, concentrating };

/// A family of motions indexed by a decreasing epsilon ladder.
///
/// oscillatory: y = x + eps * a * sin(2 pi x1 / eps) e1, a gradient laminate
/// bounded in W^{1,inf}; minors converge weakly while squares of F entries
/// do not.
///
/// concentrating: y = x + eps^(1 - 3/p) * a * P((x - x0)/eps) for a fixed
/// smooth bump profile P; the family is bounded in W^{1,p} exactly at the
/// certified exponent. The cubic minors term scales as eps^(4 - 9/p), so the
/// det gap vanishes for p = 4 and grows for p = 2.
struct SequenceSpec {
  SequenceKind kind = SequenceKind::oscillatory;
  Grid grid{32};
  double p = 4.0;
  std::vector<double> epsilons;  // decreasing; oscillatory needs 1/eps integer
  double amplitude = 0.5;
  Vec3 center{0.5, 0.5, 0.5};
};

/// Periodic displacement of one ladder member (3 components, y = x + u).
PeriodicField sequence_displacement(const SequenceSpec& seq, double epsilon);
/// Displacement of the weak-limit motion (zero for both nontrivial families).
PeriodicField sequence_limit_displacement(const SequenceSpec& seq);
/// Discrete L^p norm of grad u for the member.
double sequence_gradient_lp(const SequenceSpec& seq, double epsilon);

struct WeakLimitRow {
  double epsilon = 0.0;
  double cof_gap = 0.0;
  double det_gap = 0.0;
  double contrast_gap = 0.0;  // gap of the non-minor observable (F_11)^2
};
struct WeakLimitTable {
  std::vector<WeakLimitRow> rows;
  bool cof_pass = false;  // gap decayed along the ladder
  bool det_pass = false;
};
/// Pairing gaps of cof F and det F against the test catalog along the ladder,
/// relative to the limit motion on the same grid.
WeakLimitTable minors_weak_limit_test(const SequenceSpec& seq);

/// Two evaluation routes for the same pairing with phi, for the motion
/// y = x + u: direct quadrature of the minor of F = I + grad u versus the
/// divergence form with the derivative moved onto the test function.
struct TwoRoute {
  double direct = 0.0;
  double via_divergence = 0.0;
};
TwoRoute cofactor_two_route(const PeriodicField& u, const TestFunction& phi, int i, int alpha);
TwoRoute determinant_two_route(const PeriodicField& u, const TestFunction& phi);

/// Per-cell empirical measure over nodal states (F, v, theta), 13 scalars,
/// every fine node an equally weighted atom.
struct YoungMeasureEstimate {
  Grid cells;
  std::vector<std::vector<std::array<double, 13>>> atoms;

  double expect(std::int64_t cell,
                const std::function<double(const std::array<double, 13>&)>& f) const;
  /// Marginal histogram of one state component; weights sum to 1.
  std::vector<double> marginal_histogram(std::int64_t cell, int comp, int bins, double lo,
                                         double hi) const;
};
YoungMeasureEstimate estimate_young_measure(const PeriodicField& f, const PeriodicField& v,
                                            const PeriodicField& theta, int cells_per_axis);

/// L1-recession value of an observable along a direction in the embedded
/// variables z = (A, b, c) = (|F|^(p-1) F, |v| v, theta^ell): the limit of
/// f(state(s z))/(1 + s|z|) on a geometric s ladder. theta is floored at 1e-6
/// so constitutive observables stay evaluable at c = 0.
struct RecessionResult {
  double value = 0.0;
  bool converged = false;
};
using Observable = std::function<double(const Matrix3&, const Vec3&, double)>;
RecessionResult recession(const Observable& f, double p, double ell,
                          const std::array<double, 13>& direction);

/// Concentration-mass estimate: the part of the energy density above a
/// truncation threshold (99.9th percentile of the coarsest rung), clipped at
/// zero and integrated per cell on the finest rung.
struct ConcentrationEstimate {
  Grid cells;
  std::vector<double> cell_mass;
  double total_mass = 0.0;
  std::vector<double> ladder_totals;
  double threshold = 0.0;
  bool stable = false;  // totals drifted less than mass_drift_tol on the last rungs
};
ConcentrationEstimate estimate_concentration(const std::vector<PeriodicField>& energy_ladder,
                                             int cells_per_axis, double mass_drift_tol = 0.2);

/// Distributional residuals of the averaged equations evaluated on a solver
/// trajectory (atomic measures at nodal values): the minors transport block,
/// the momentum equation, and the time-integrated energy identity.
struct AveragedResiduals {
  double minors_eq = 0.0;
  double momentum_eq = 0.0;
  double energy_eq = 0.0;
};
AveragedResiduals averaged_equations_check(const Trajectory& traj, const SolverConfig& cfg,
                                           const TestFunction& phi);

}  // namespace polytherm
