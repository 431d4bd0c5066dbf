#include "polytherm/solver.hpp"

#include <algorithm>
#include <cmath>

#include "polytherm/minors.hpp"

namespace polytherm {

InitialData InitialData::equilibrium(double theta0) {
  InitialData d;
  d.displacement = [](const Vec3&) -> Vec3 { return {0.0, 0.0, 0.0}; };
  d.velocity = [](const Vec3&) -> Vec3 { return {0.0, 0.0, 0.0}; };
  d.temperature = [theta0](const Vec3&) { return theta0; };
  return d;
}

SimState make_state(const SolverConfig& cfg, const InitialData& init) {
  SimState s;
  s.t = 0.0;
  s.u = PeriodicField(cfg.grid, 3);
  s.v = PeriodicField(cfg.grid, 3);
  s.theta = PeriodicField(cfg.grid, 1);
  s.u.fill([&](const Vec3& x, int c) { return init.displacement(x)[static_cast<std::size_t>(c)]; });
  s.v.fill([&](const Vec3& x, int c) { return init.velocity(x)[static_cast<std::size_t>(c)]; });
  s.theta.fill([&](const Vec3& x, int) { return init.temperature(x); });
  return s;
}

PeriodicField deformation_gradient(const PeriodicField& u) {
  PeriodicField f = grad(u);
  for (std::int64_t node = 0; node < u.grid().num_nodes(); ++node)
    for (int i = 0; i < 3; ++i) f.at(node, 4 * i) += 1.0;
  return f;
}

namespace {

Matrix3 node_matrix(const PeriodicField& f, std::int64_t node) {
  Matrix3 m;
  for (int k = 0; k < 9; ++k) m.a[static_cast<std::size_t>(k)] = f.at(node, k);
  return m;
}

struct NodeCoeffs {
  double mu = 0.0;
  double k = 0.0;
};

NodeCoeffs coefficients(const CoefficientSpec& spec, double e, double theta) {
  NodeCoeffs c;
  if (spec.state_dependent) {
    c.mu = spec.mu0 * e / (theta + 1.0);
    c.k = spec.k0 * e;
  } else {
    c.mu = spec.mu0;
    c.k = spec.k0;
  }
  return c;
}

void check_coefficient_bounds(const CoefficientSpec& spec, const NodeCoeffs& c, double e,
                              double theta) {
  if (c.mu == 0.0 && c.k == 0.0) return;
  const double scale = std::abs(e);
  if (std::abs(c.mu * theta) > spec.mu_bound * scale)
    throw NumericalError(NumericalError::Kind::coefficient_bound,
                         "viscosity bound |mu theta| <= mu_bound |e| violated");
  if (std::abs(c.k) > spec.k_bound * scale)
    throw NumericalError(NumericalError::Kind::coefficient_bound,
                         "conduction bound |k| <= k_bound |e| violated");
}

void check_theta_floor(const PeriodicField& theta, double floor) {
  for (double v : theta.values())
    if (!(v > floor))
      throw NumericalError(NumericalError::Kind::theta_floor, "temperature at or below the floor");
}

}  // namespace

Rhs rhs(const SimState& state, const SolverConfig& cfg) {
  const EnergyModel& m = cfg.model;
  check_theta_floor(state.theta, cfg.theta_floor);
  const bool theta_evolves = m.c_th > 0.0;
  if (!theta_evolves && (cfg.heat_supply != 0.0 || cfg.coeff.k0 != 0.0))
    throw ConfigError("heat supply or conduction require c_th > 0");

  const PeriodicField f = deformation_gradient(state.u);
  const PeriodicField gv = grad(state.v);
  const PeriodicField gtheta = grad(state.theta);
  const std::int64_t nn = cfg.grid.num_nodes();

  PeriodicField stress_and_visc(cfg.grid, 9);  // Sigma + mu grad v
  PeriodicField heat_flux(cfg.grid, 3);        // k grad theta
  PeriodicField local_source(cfg.grid, 1);     // pointwise part of the theta equation

  for (std::int64_t node = 0; node < nn; ++node) {
    const Matrix3 fm = node_matrix(f, node);
    const Matrix3 gvm = node_matrix(gv, node);
    const double theta = state.theta.at(node, 0);
    const MinorsVector xi = minors_vector(fm);
    const ThermoEval ev = eval(m, xi, theta);
    const NodeCoeffs c = coefficients(cfg.coeff, ev.e, theta);
    check_coefficient_bounds(cfg.coeff, c, ev.e, theta);

    for (int k = 0; k < 9; ++k)
      stress_and_visc.at(node, k) =
          ev.sigma.a[static_cast<std::size_t>(k)] + c.mu * gvm.a[static_cast<std::size_t>(k)];
    for (int a = 0; a < 3; ++a) heat_flux.at(node, a) = c.k * gtheta.at(node, a);

    if (theta_evolves) {
      // theta psi_thetaF : grad v with psi_thetaF = kappa cof F, plus the
      // viscous heating and the supply; conduction enters through div below.
      const double cross = m.kappa * theta * ddot(xi.z, gvm);
      const double heating = c.mu * gvm.frobenius_sq();
      local_source.at(node, 0) = cross + heating + cfg.heat_supply;
    }
  }

  Rhs out;
  out.du = state.v;
  out.dv = div(stress_and_visc);
  out.dtheta = PeriodicField(cfg.grid, 1);
  if (theta_evolves) {
    const PeriodicField conduction = div(heat_flux);
    for (std::int64_t node = 0; node < nn; ++node) {
      const double theta = state.theta.at(node, 0);
      out.dtheta.at(node, 0) =
          (local_source.at(node, 0) + conduction.at(node, 0)) / (2.0 * m.c_th * theta);
    }
  }
  return out;
}

double stable_dt(const SimState& state, const SolverConfig& cfg) {
  const double h = cfg.grid.h_min();
  double dt = h / cfg.c_max;
  double mu_max = 0.0, dtheta_max = 0.0;
  if (cfg.coeff.mu0 > 0.0 || cfg.coeff.k0 > 0.0) {
    const PeriodicField f = deformation_gradient(state.u);
    const std::int64_t nn = cfg.grid.num_nodes();
    for (std::int64_t node = 0; node < nn; ++node) {
      const double theta = state.theta.at(node, 0);
      const double e =
          internal_energy(cfg.model, minors_vector(node_matrix(f, node)), theta);
      const NodeCoeffs c = coefficients(cfg.coeff, e, theta);
      mu_max = std::max(mu_max, c.mu);
      if (cfg.model.c_th > 0.0)
        dtheta_max = std::max(dtheta_max, c.k / (2.0 * cfg.model.c_th * theta));
    }
  }
  if (mu_max > 0.0) dt = std::min(dt, h * h / (6.0 * mu_max));
  if (dtheta_max > 0.0) dt = std::min(dt, h * h / (6.0 * dtheta_max));
  return cfg.cfl * dt;
}

namespace {

void axpy(PeriodicField& out, double a, const PeriodicField& x) {
  const std::size_t n = out.values().size();
  for (std::size_t k = 0; k < n; ++k) out.values()[k] += a * x.values()[k];
}

SimState advance(const SimState& s, double a, const Rhs& r) {
  SimState out = s;
  out.t = s.t + a;
  axpy(out.u, a, r.du);
  axpy(out.v, a, r.dv);
  axpy(out.theta, a, r.dtheta);
  return out;
}

}  // namespace

SimState step(const SimState& state, const SolverConfig& cfg, double dt) {
  if (dt > stable_dt(state, cfg) * (1.0 + 1e-9))
    throw NumericalError(NumericalError::Kind::cfl, "time step exceeds the CFL bound");
  const Rhs k1 = rhs(state, cfg);
  const Rhs k2 = rhs(advance(state, 0.5 * dt, k1), cfg);
  const Rhs k3 = rhs(advance(state, 0.5 * dt, k2), cfg);
  const Rhs k4 = rhs(advance(state, dt, k3), cfg);
  SimState out = state;
  out.t = state.t + dt;
  const double w = dt / 6.0;
  axpy(out.u, w, k1.du);
  axpy(out.u, 2.0 * w, k2.du);
  axpy(out.u, 2.0 * w, k3.du);
  axpy(out.u, w, k4.du);
  axpy(out.v, w, k1.dv);
  axpy(out.v, 2.0 * w, k2.dv);
  axpy(out.v, 2.0 * w, k3.dv);
  axpy(out.v, w, k4.dv);
  axpy(out.theta, w, k1.dtheta);
  axpy(out.theta, 2.0 * w, k2.dtheta);
  axpy(out.theta, 2.0 * w, k3.dtheta);
  axpy(out.theta, w, k4.dtheta);
  check_theta_floor(out.theta, cfg.theta_floor);
  return out;
}

DiagnosticsRow diagnostics(const SimState& state, const SolverConfig& cfg) {
  DiagnosticsRow row;
  row.t = state.t;
  const PeriodicField f = deformation_gradient(state.u);
  const PeriodicField gv = grad(state.v);
  const PeriodicField gtheta = grad(state.theta);
  const std::int64_t nn = cfg.grid.num_nodes();
  const double vol = cfg.grid.cell_volume();
  double energy = 0.0, entropy_total = 0.0, diss_heat = 0.0, diss_visc = 0.0;
  double theta_min = 1e300;
  for (std::int64_t node = 0; node < nn; ++node) {
    const Matrix3 fm = node_matrix(f, node);
    const double theta = state.theta.at(node, 0);
    const MinorsVector xi = minors_vector(fm);
    const double e = internal_energy(cfg.model, xi, theta);
    double v2 = 0.0, gv2 = 0.0, gth2 = 0.0;
    for (int i = 0; i < 3; ++i) v2 += state.v.at(node, i) * state.v.at(node, i);
    for (int k = 0; k < 9; ++k) gv2 += gv.at(node, k) * gv.at(node, k);
    for (int a = 0; a < 3; ++a) gth2 += gtheta.at(node, a) * gtheta.at(node, a);
    const NodeCoeffs c = coefficients(cfg.coeff, e, theta);
    energy += 0.5 * v2 + e;
    entropy_total += entropy(cfg.model, xi, theta);
    diss_heat += c.k * gth2 / (theta * theta);
    diss_visc += c.mu * gv2 / theta;
    theta_min = std::min(theta_min, theta);
  }
  row.energy = energy * vol;
  row.entropy = entropy_total * vol;
  row.diss_heat = diss_heat * vol;
  row.diss_visc = diss_visc * vol;
  row.theta_min = theta_min;
  row.max_grad_v = max_abs(gv);
  row.max_grad_y = max_abs(f);
  row.curl_residual = curl_constraint_residual(f);
  return row;
}

Trajectory run(const SolverConfig& cfg, const InitialData& init) {
  SimState state = make_state(cfg, init);
  double dt = stable_dt(state, cfg);
  int nsteps;
  if (cfg.force_steps > 0) {
    nsteps = cfg.force_steps;
    if (cfg.t_end / nsteps > dt * (1.0 + 1e-9))
      throw NumericalError(NumericalError::Kind::cfl, "forced step count violates the CFL bound");
  } else {
    nsteps = static_cast<int>(std::ceil(cfg.t_end / dt - 1e-12));
    nsteps = std::max(nsteps, 1);
  }
  dt = cfg.t_end / nsteps;

  Trajectory traj;
  traj.dt = dt;
  const auto record = [&](const SimState& s) {
    DiagnosticsRow row = diagnostics(s, cfg);
    if (std::max(row.max_grad_v, row.max_grad_y) > cfg.lipschitz_max)
      throw LipschitzError("gradient bound exceeded; the run is no longer a smooth-solution surrogate");
    if (cfg.enforce_energy_bound && !traj.diag.empty()) {
      const double e0 = traj.diag.front().energy;
      const double budget = e0 + s.t * std::abs(cfg.heat_supply) +
                            cfg.energy_tol * (std::abs(e0) + 1.0);
      if (row.energy > budget)
        throw NumericalError(NumericalError::Kind::energy_bound,
                             "total energy exceeds the initial energy plus supplied heat");
    }
    traj.snapshots.push_back(s);
    traj.diag.push_back(row);
  };
  record(state);
  for (int n = 0; n < nsteps; ++n) {
    state = step(state, cfg, dt);
    if ((n + 1) % cfg.snapshot_stride == 0 || n + 1 == nsteps) record(state);
  }
  return traj;
}

std::vector<double> energy_equation_residual(const Trajectory& traj, const SolverConfig& cfg,
                                             double mu_scale) {
  if (traj.snapshots.size() < 3) throw std::invalid_argument("need at least 3 snapshots");
  const std::int64_t nn = cfg.grid.num_nodes();

  const auto energy_density = [&](const SimState& s) {
    const PeriodicField f = deformation_gradient(s.u);
    PeriodicField e(cfg.grid, 1);
    for (std::int64_t node = 0; node < nn; ++node) {
      double v2 = 0.0;
      for (int i = 0; i < 3; ++i) v2 += s.v.at(node, i) * s.v.at(node, i);
      e.at(node, 0) = 0.5 * v2 + internal_energy(cfg.model, minors_vector(node_matrix(f, node)),
                                                 s.theta.at(node, 0));
    }
    return e;
  };

  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < traj.snapshots.size(); ++k) {
    const SimState& sm = traj.snapshots[k - 1];
    const SimState& s0 = traj.snapshots[k];
    const SimState& sp = traj.snapshots[k + 1];
    const double dtm = s0.t - sm.t, dtp = sp.t - s0.t;
    if (std::abs(dtp - dtm) > 1e-12 * (dtp + dtm)) continue;  // needs uniform spacing

    const PeriodicField em = energy_density(sm);
    const PeriodicField ep = energy_density(sp);
    const PeriodicField f = deformation_gradient(s0.u);
    const PeriodicField gv = grad(s0.v);
    const PeriodicField gtheta = grad(s0.theta);

    PeriodicField flux_field(cfg.grid, 3);  // Sigma^T v + mu (grad v) v + k grad theta
    for (std::int64_t node = 0; node < nn; ++node) {
      const Matrix3 fm = node_matrix(f, node);
      const double theta = s0.theta.at(node, 0);
      const MinorsVector xi = minors_vector(fm);
      const ThermoEval ev = eval(cfg.model, xi, theta);
      const NodeCoeffs c = coefficients(cfg.coeff, ev.e, theta);
      for (int a = 0; a < 3; ++a) {
        double w = c.k * gtheta.at(node, a);
        for (int i = 0; i < 3; ++i)
          w += (ev.sigma(i, a) + mu_scale * c.mu * gv.at(node, 3 * i + a)) * s0.v.at(node, i);
        flux_field.at(node, a) = w;
      }
    }
    const PeriodicField dflux = div(flux_field);
    PeriodicField res(cfg.grid, 1);
    const double inv2dt = 1.0 / (sp.t - sm.t);
    for (std::int64_t node = 0; node < nn; ++node)
      res.at(node, 0) = (ep.at(node, 0) - em.at(node, 0)) * inv2dt - dflux.at(node, 0) -
                        cfg.heat_supply;
    out.push_back(lp_norm(res, 2.0));
  }
  if (out.empty()) throw std::invalid_argument("no uniformly spaced interior snapshots");
  return out;
}

}  // namespace polytherm
