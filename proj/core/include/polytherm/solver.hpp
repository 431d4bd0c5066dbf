#pragma once

#include <functional>
#include <vector>

#include "polytherm/constitutive.hpp"
#include "polytherm/errors.hpp"
#include "polytherm/grid.hpp"

namespace polytherm {

/// Dissipation coefficients. Constant by default; the state-dependent form
/// mu = mu0 e/(theta + 1), k = k0 e keeps |mu theta| < mu0 |e| and
/// |k| < k0 |e| by construction. For constant coefficients the same bounds
/// are monitored at runtime against mu_bound, k_bound.
struct CoefficientSpec {
  double mu0 = 0.0;
  double k0 = 0.0;
  bool state_dependent = false;
  double mu_bound = 1e6;
  double k_bound = 1e6;
};

struct SolverConfig {
  EnergyModel model;
  Grid grid{8};
  CoefficientSpec coeff;
  double heat_supply = 0.0;  // uniform r
  double cfl = 0.4;
  double c_max = 4.0;  // wave-speed bound entering the advective dt limit
  double t_end = 0.1;
  int snapshot_stride = 10;
  /// When positive, the step count is forced (dt = t_end/force_steps) so that
  /// several runs share snapshot times; still validated against the CFL bound.
  int force_steps = 0;
  double theta_floor = 1e-6;
  double lipschitz_max = 1e3;  // max |grad v| or |grad y| before abort
  bool enforce_energy_bound = true;
  double energy_tol = 1e-6;
};

/// Initial fields as closures of position; the motion is y = x + displacement.
struct InitialData {
  std::function<Vec3(const Vec3&)> displacement;
  std::function<Vec3(const Vec3&)> velocity;
  std::function<double(const Vec3&)> temperature;

  static InitialData equilibrium(double theta0);
};

struct SimState {
  double t = 0.0;
  PeriodicField u;      // periodic displacement, 3 components; the motion is y = x + u
  PeriodicField v;      // 3 components
  PeriodicField theta;  // 1 component
};

struct DiagnosticsRow {
  double t = 0.0;
  double energy = 0.0;        // integral of 1/2|v|^2 + e
  double entropy = 0.0;       // integral of eta
  double diss_heat = 0.0;     // integral of k |grad theta|^2 / theta^2
  double diss_visc = 0.0;     // integral of mu |grad v|^2 / theta
  double theta_min = 0.0;
  double max_grad_v = 0.0;
  double max_grad_y = 0.0;
  double curl_residual = 0.0;
};

struct Trajectory {
  std::vector<SimState> snapshots;
  std::vector<DiagnosticsRow> diag;
  double dt = 0.0;
};

struct Rhs {
  PeriodicField du, dv, dtheta;
};

SimState make_state(const SolverConfig& cfg, const InitialData& init);

/// F = I + grad_h u, component layout i*3 + alpha. The identity is added
/// analytically so the periodic difference stencil only ever sees u.
PeriodicField deformation_gradient(const PeriodicField& u);

/// Semidiscrete right side: du = v, dv = div(Sigma + mu grad v), and the
/// temperature equation obtained from the entropy identity times theta:
///   (-theta psi_thetatheta) dtheta
///     = theta psi_thetaF : grad v + div(k grad theta) + mu |grad v|^2 + r.
/// Models with c_th = 0 freeze theta (and reject r != 0).
Rhs rhs(const SimState& state, const SolverConfig& cfg);

/// Largest stable step: cfl * min(h/c_max, h^2/(6 mu_max), h^2/(6 D_theta)).
double stable_dt(const SimState& state, const SolverConfig& cfg);

/// One classical RK4 step; F is re-derived from u inside every stage so the
/// gradient constraint on F holds exactly at all times.
SimState step(const SimState& state, const SolverConfig& cfg, double dt);

DiagnosticsRow diagnostics(const SimState& state, const SolverConfig& cfg);

/// Integrate to t_end, recording snapshots every snapshot_stride steps plus
/// the final state. Enforces the temperature floor, the coefficient bounds,
/// the Lipschitz monitor, and the energy bound
/// E(t) <= E(0) + integral |r| + tolerance.
Trajectory run(const SolverConfig& cfg, const InitialData& init);

/// Discrete residual of the conservative total-energy equation evaluated on
/// stored snapshots (central time differences, grid-operator fluxes); one L2
/// norm per interior snapshot. Pass mu_scale != 1 to probe sensitivity of the
/// residual to a miscalibrated viscosity in the evaluator only.
std::vector<double> energy_equation_residual(const Trajectory& traj, const SolverConfig& cfg,
                                             double mu_scale = 1.0);

}  // namespace polytherm
