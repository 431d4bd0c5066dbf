#include "polytherm/augmented.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace polytherm {

ConservedVector conserved(const AugmentedState& u, const EnergyModel& model) {
  ConservedVector out;
  out.xi = u.xi;
  out.v = u.v;
  out.energy = 0.5 * dot(u.v, u.v) + internal_energy(model, u.xi, u.theta);
  return out;
}

namespace {

// Flux with F taken from the F block of xi; no consistency validation.
std::array<double, kAugDim> flux_raw(const MinorsVector& xi, const Vec3& v, double theta,
                                     const EnergyModel& model, int alpha) {
  const MinorsJacobian jac = minors_jacobian(xi.f);
  const ThermoEval ev = eval(model, xi, theta);
  std::array<double, kAugDim> out{};
  for (int b = 0; b < kMinorsDim; ++b) {
    const Matrix3& jb = jac.blocks[static_cast<std::size_t>(b)];
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += jb(i, alpha) * v[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(b)] = s;
  }
  double ev_row = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double s = ev.sigma(i, alpha);
    out[static_cast<std::size_t>(19 + i)] = s;
    ev_row += s * v[static_cast<std::size_t>(i)];
  }
  out[22] = ev_row;
  return out;
}

double entropy_of_flat(const std::array<double, kAugDim>& u, const EnergyModel& model) {
  const AugmentedState s = AugmentedState::from_flat(u);
  return entropy(model, s.xi, s.theta);
}

std::array<double, kAugDim> conserved_of_flat(const std::array<double, kAugDim>& u,
                                              const EnergyModel& model) {
  const AugmentedState s = AugmentedState::from_flat(u);
  return conserved(s, model).flat();
}

}  // namespace

std::array<double, kAugDim> flux(const AugmentedState& u, const Matrix3& f,
                                 const EnergyModel& model, int alpha, double consistency_tol) {
  if (alpha < 0 || alpha > 2) throw std::invalid_argument("flux: direction must be 0, 1 or 2");
  const MinorsVector phi = minors_vector(f);
  const MinorsVector diff = u.xi - phi;
  if (std::sqrt(diff.norm_sq()) > consistency_tol * (1.0 + std::sqrt(phi.norm_sq())))
    throw std::invalid_argument("flux: xi is not the minors vector of F");
  return flux_raw(u.xi, u.v, u.theta, model, alpha);
}

Multiplier multiplier(const AugmentedState& u, const EnergyModel& model) {
  const ThermoEval ev = eval(model, u.xi, u.theta);
  Multiplier g;
  const double inv_theta = 1.0 / u.theta;
  for (int b = 0; b < kMinorsDim; ++b)
    g.g[static_cast<std::size_t>(b)] = inv_theta * ev.dpsi_dxi.component(b);
  for (int i = 0; i < 3; ++i)
    g.g[static_cast<std::size_t>(19 + i)] = inv_theta * u.v[static_cast<std::size_t>(i)];
  g.g[22] = -inv_theta;
  return g;
}

EntropyPairResidual check_entropy_pair(const Matrix3& f, const Vec3& v, double theta,
                                       const EnergyModel& model, double step) {
  AugmentedState u;
  u.xi = minors_vector(f);
  u.v = v;
  u.theta = theta;
  const std::array<double, kAugDim> u0 = u.flat();
  const Multiplier g = multiplier(u, model);

  EntropyPairResidual res;

  // Entropy relation grad H = G . grad A, H = -eta.
  for (int k = 0; k < kAugDim; ++k) {
    auto up = u0, um = u0;
    up[static_cast<std::size_t>(k)] += step;
    um[static_cast<std::size_t>(k)] -= step;
    const double dh =
        (-entropy_of_flat(up, model) + entropy_of_flat(um, model)) / (2.0 * step);
    const auto ap = conserved_of_flat(up, model);
    const auto am = conserved_of_flat(um, model);
    double ga = 0.0;
    for (int m = 0; m < kAugDim; ++m)
      ga += g.g[static_cast<std::size_t>(m)] *
            (ap[static_cast<std::size_t>(m)] - am[static_cast<std::size_t>(m)]) / (2.0 * step);
    res.r_entropy = std::max(res.r_entropy, std::abs(dh - ga));
  }

  // Flux relation G . grad f_alpha = 0 (the entropy flux vanishes). The raw
  // contraction r[alpha][j,beta] is antisymmetric under the joint swap of the
  // flux direction alpha and the F column beta, so it annihilates every field
  // satisfying the gradient constraint d_alpha F_{j beta} = d_beta F_{j alpha}.
  // The residual reported here is the part that survives that constraint:
  // all components outside the F block, the alpha = beta entries, and the
  // symmetrized off-diagonal pairs.
  std::array<std::array<double, kAugDim>, 3> r{};
  for (int alpha = 0; alpha < 3; ++alpha) {
    for (int k = 0; k < kAugDim; ++k) {
      auto up = u0, um = u0;
      up[static_cast<std::size_t>(k)] += step;
      um[static_cast<std::size_t>(k)] -= step;
      const AugmentedState sp = AugmentedState::from_flat(up);
      const AugmentedState sm = AugmentedState::from_flat(um);
      const auto fp = flux_raw(sp.xi, sp.v, sp.theta, model, alpha);
      const auto fm = flux_raw(sm.xi, sm.v, sm.theta, model, alpha);
      double gf = 0.0;
      for (int m = 0; m < kAugDim; ++m)
        gf += g.g[static_cast<std::size_t>(m)] *
              (fp[static_cast<std::size_t>(m)] - fm[static_cast<std::size_t>(m)]) / (2.0 * step);
      r[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(k)] = gf;
    }
  }
  for (int alpha = 0; alpha < 3; ++alpha) {
    for (int k = 9; k < kAugDim; ++k)
      res.r_flux = std::max(
          res.r_flux, std::abs(r[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(k)]));
    for (int j = 0; j < 3; ++j)
      for (int beta = 0; beta < 3; ++beta) {
        const double sym = r[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(3 * j + beta)] +
                           r[static_cast<std::size_t>(beta)][static_cast<std::size_t>(3 * j + alpha)];
        res.r_flux = std::max(res.r_flux, 0.5 * std::abs(sym));
      }
  }
  return res;
}

AugmentedState invert_conserved(const ConservedVector& v, const EnergyModel& model,
                                double theta_guess, double theta_max, int max_iter, double tol) {
  const double target = v.energy - 0.5 * dot(v.v, v.v);
  double lo = model.theta_min * (1.0 + 1e-9);
  double hi = theta_max;
  const double e_lo = internal_energy(model, v.xi, lo);
  const double e_hi = internal_energy(model, v.xi, hi);
  if (!(e_hi > e_lo))
    throw std::domain_error("invert_conserved: internal energy is not increasing in theta");
  if (target < e_lo || target > e_hi)
    throw std::domain_error("invert_conserved: energy outside the attainable range");

  double theta = theta_guess;
  if (!(theta > lo) || !(theta < hi)) theta = 0.5 * (lo + hi);
  const double scale = 1.0 + std::abs(target);
  for (int it = 0; it < max_iter; ++it) {
    const ThermoEval ev = eval(model, v.xi, theta);
    const double g = ev.e - target;
    if (std::abs(g) <= tol * scale) {
      AugmentedState out;
      out.xi = v.xi;
      out.v = v.v;
      out.theta = theta;
      return out;
    }
    if (g > 0.0)
      hi = theta;
    else
      lo = theta;
    const double de = -theta * ev.d2psi_dtheta2;  // e_theta = theta * eta_theta
    double next = theta - g / de;
    if (!(de > 0.0) || !(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    theta = next;
  }
  throw std::runtime_error("invert_conserved: no convergence");
}

double symmetric_hessian_min_eig(const ConservedVector& v, const EnergyModel& model,
                                 double step) {
  const std::array<double, kAugDim> v0 = v.flat();
  const AugmentedState base = invert_conserved(v, model, 1.0);
  const double theta_guess = base.theta;

  auto h_tilde = [&](const std::array<double, kAugDim>& flat) {
    ConservedVector w;
    for (int b = 0; b < kMinorsDim; ++b)
      w.xi.set_component(b, flat[static_cast<std::size_t>(b)]);
    w.v = {flat[19], flat[20], flat[21]};
    w.energy = flat[22];
    return -entropy(model, w.xi, invert_conserved(w, model, theta_guess).theta);
  };

  const double h0 = h_tilde(v0);
  Eigen::Matrix<double, kAugDim, kAugDim> hess;
  std::array<double, kAugDim> plus{}, minus{};
  for (int k = 0; k < kAugDim; ++k) {
    auto up = v0, um = v0;
    up[static_cast<std::size_t>(k)] += step;
    um[static_cast<std::size_t>(k)] -= step;
    plus[static_cast<std::size_t>(k)] = h_tilde(up);
    minus[static_cast<std::size_t>(k)] = h_tilde(um);
    hess(k, k) = (plus[static_cast<std::size_t>(k)] - 2.0 * h0 +
                  minus[static_cast<std::size_t>(k)]) /
                 (step * step);
  }
  for (int k = 0; k < kAugDim; ++k)
    for (int m = k + 1; m < kAugDim; ++m) {
      auto upp = v0, upm = v0, ump = v0, umm = v0;
      upp[static_cast<std::size_t>(k)] += step;
      upp[static_cast<std::size_t>(m)] += step;
      upm[static_cast<std::size_t>(k)] += step;
      upm[static_cast<std::size_t>(m)] -= step;
      ump[static_cast<std::size_t>(k)] -= step;
      ump[static_cast<std::size_t>(m)] += step;
      umm[static_cast<std::size_t>(k)] -= step;
      umm[static_cast<std::size_t>(m)] -= step;
      const double val =
          (h_tilde(upp) - h_tilde(upm) - h_tilde(ump) + h_tilde(umm)) / (4.0 * step * step);
      hess(k, m) = val;
      hess(m, k) = val;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, kAugDim, kAugDim>> es(hess);
  return es.eigenvalues().minCoeff();
}

}  // namespace polytherm
