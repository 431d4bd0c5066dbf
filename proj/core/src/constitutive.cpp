#include "polytherm/constitutive.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace polytherm {

void EnergyModel::validate() const {
  if (alpha2 < 0.0 || alpha4 < 0.0 || beta < 0.0 || delta_det < 0.0 || c_th < 0.0)
    throw std::invalid_argument("energy model: coefficients must be nonnegative");
  if (p < 1.0 || ell <= 1.0) throw std::invalid_argument("energy model: need p >= 1, ell > 1");
  if (theta_min <= 0.0) throw std::invalid_argument("energy model: theta_min must be positive");
}

namespace {
void require_theta(const EnergyModel& m, double theta) {
  if (!(theta > m.theta_min)) throw std::domain_error("temperature at or below floor");
}
double det_term(const EnergyModel& m, double w) {
  return m.det_quadratic ? m.delta_det * w * w : m.delta_det * std::sqrt(1.0 + w * w);
}
}  // namespace

double free_energy(const EnergyModel& m, const MinorsVector& xi, double theta) {
  require_theta(m, theta);
  const double f2 = xi.f.frobenius_sq();
  const double z2 = xi.z.frobenius_sq();
  return m.alpha2 * f2 + m.alpha4 * f2 * f2 + m.beta * z2 + det_term(m, xi.w) +
         m.kappa * theta * xi.w - m.c_th * theta * theta;
}

double entropy(const EnergyModel& m, const MinorsVector& xi, double theta) {
  require_theta(m, theta);
  return -m.kappa * xi.w + 2.0 * m.c_th * theta;
}

double internal_energy(const EnergyModel& m, const MinorsVector& xi, double theta) {
  require_theta(m, theta);
  const double f2 = xi.f.frobenius_sq();
  const double z2 = xi.z.frobenius_sq();
  return m.alpha2 * f2 + m.alpha4 * f2 * f2 + m.beta * z2 + det_term(m, xi.w) +
         m.c_th * theta * theta;
}

ThermoEval eval(const EnergyModel& m, const MinorsVector& xi, double theta) {
  require_theta(m, theta);
  ThermoEval out;
  const double f2 = xi.f.frobenius_sq();
  const double w = xi.w;
  const double root = std::sqrt(1.0 + w * w);

  out.psi = free_energy(m, xi, theta);
  out.dpsi_dtheta = m.kappa * w - 2.0 * m.c_th * theta;
  out.eta = -out.dpsi_dtheta;
  out.e = out.psi + theta * out.eta;
  out.d2psi_dtheta2 = -2.0 * m.c_th;

  out.dpsi_dxi.f = (2.0 * m.alpha2 + 4.0 * m.alpha4 * f2) * xi.f;
  out.dpsi_dxi.z = 2.0 * m.beta * xi.z;
  out.dpsi_dxi.w = (m.det_quadratic ? 2.0 * m.delta_det * w : m.delta_det * w / root) + m.kappa * theta;

  out.d2psi_dxidtheta.w = m.kappa;

  // xi-Hessian: block diagonal except the rank-one F term
  auto& h = out.d2psi_dxi2;
  const double fdiag = 2.0 * m.alpha2 + 4.0 * m.alpha4 * f2;
  for (int a = 0; a < 9; ++a) {
    h[static_cast<std::size_t>(a * kMinorsDim + a)] = fdiag;
    for (int b = 0; b < 9; ++b)
      h[static_cast<std::size_t>(a * kMinorsDim + b)] +=
          8.0 * m.alpha4 * xi.f.a[static_cast<std::size_t>(a)] * xi.f.a[static_cast<std::size_t>(b)];
  }
  for (int a = 9; a < 18; ++a) h[static_cast<std::size_t>(a * kMinorsDim + a)] = 2.0 * m.beta;
  h[18 * kMinorsDim + 18] = m.det_quadratic ? 2.0 * m.delta_det : m.delta_det / (root * root * root);

  out.sigma = minors_jacobian(xi.f).contract_left(out.dpsi_dxi);
  return out;
}

Matrix3 stress(const EnergyModel& m, const Matrix3& f, double theta) {
  require_theta(m, theta);
  const MinorsVector xi = minors_vector(f);
  const ThermoEval ev = eval(m, xi, theta);
  return ev.sigma;
}

double hessian_min_eig(const EnergyModel& m, const MinorsVector& xi, double theta) {
  const ThermoEval ev = eval(m, xi, theta);
  Eigen::Matrix<double, kMinorsDim, kMinorsDim> h;
  for (int a = 0; a < kMinorsDim; ++a)
    for (int b = 0; b < kMinorsDim; ++b)
      h(a, b) = ev.d2psi_dxi2[static_cast<std::size_t>(a * kMinorsDim + b)];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, kMinorsDim, kMinorsDim>> es(h);
  return es.eigenvalues().minCoeff();
}

bool GrowthReport::all_pass() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return true;
}

std::string GrowthReport::summary() const {
  std::ostringstream os;
  os << "growth report: |F|<=" << region.f_max << " theta in [" << region.theta_lo << ","
     << region.theta_hi << "] samples=" << region.samples << " rays to " << ray_scale << "\n";
  for (const auto& c : conditions)
    os << "  " << c.name << ": inf=" << c.inf_ratio << " sup=" << c.sup_ratio << " "
       << (c.pass ? "PASS" : "FAIL") << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
  return os.str();
}

namespace {

Matrix3 random_matrix(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix3 f;
  for (auto& v : f.a) v = scale * u(rng);
  return f;
}

double energy_scale(const EnergyModel& m, const Matrix3& f, double theta) {
  return std::pow(f.frobenius(), m.p) + std::pow(theta, m.ell);
}

}  // namespace

GrowthReport check_growth(const EnergyModel& m, const SampleRegion& region, double ray_scale) {
  if (region.samples <= 0) throw std::invalid_argument("check_growth: empty region");
  if (!(region.theta_lo > 0.0)) throw std::invalid_argument("check_growth: theta must be bounded away from 0");
  GrowthReport rep;
  rep.region = region;
  rep.ray_scale = ray_scale;

  std::mt19937_64 rng(region.seed);
  std::uniform_real_distribution<double> utheta(region.theta_lo, region.theta_hi);

  // Monte-Carlo over the compact region: ratio bounds for e, psi and the
  // gradient-to-value ratio used by the stability estimates.
  double e_inf = 1e300, e_sup = -1e300;
  double psi_inf = 1e300, psi_sup = -1e300;
  double g5_sup = 0.0;
  for (int s = 0; s < region.samples; ++s) {
    const Matrix3 f = random_matrix(rng, region.f_max / 3.0);
    const double theta = utheta(rng);
    const MinorsVector xi = minors_vector(f);
    const ThermoEval ev = eval(m, xi, theta);
    const double denom = energy_scale(m, f, theta) + 1.0;
    e_inf = std::min(e_inf, ev.e / denom);
    e_sup = std::max(e_sup, ev.e / denom);
    psi_inf = std::min(psi_inf, ev.psi / denom);
    psi_sup = std::max(psi_sup, ev.psi / denom);
    const double psi_abs = std::abs(ev.psi);
    if (psi_abs > 1e-8) {
      const double grad_norm = std::sqrt(ev.dpsi_dxi.norm_sq());
      g5_sup = std::max(g5_sup, grad_norm / psi_abs);
    }
  }

  // Ray studies to large |F| and theta: the temperature-derivative and stress
  // ratios must decay along the ladder, the energy ratio must stay bounded.
  const std::array<Matrix3, 3> ray_dirs = {Matrix3::identity(), random_matrix(rng, 1.0),
                                           random_matrix(rng, 1.0)};
  bool decay_eta = true, decay_sigma = true;
  double eta_last = 0.0, sigma_last = 0.0, eta_first = 0.0, sigma_first = 0.0;
  double e_ray_first = 0.0, e_ray_last = 0.0;
  {
    double prev_eta = -1.0, prev_sigma = -1.0;
    bool first_rung = true;
    for (double s = 10.0; s <= ray_scale * 1.0001; s *= 10.0) {
      double eta_ratio = 0.0, sigma_ratio = 0.0, e_ratio = 0.0;
      for (const Matrix3& d0 : ray_dirs) {
        Matrix3 d = (1.0 / d0.frobenius()) * d0;
        const Matrix3 f = s * d;
        const double theta = region.theta_hi;
        const MinorsVector xi = minors_vector(f);
        const ThermoEval ev = eval(m, xi, theta);
        const double denom = energy_scale(m, f, theta);
        eta_ratio = std::max(eta_ratio, std::abs(ev.dpsi_dtheta) / denom);
        sigma_ratio = std::max(sigma_ratio, ev.sigma.frobenius() / denom);
        e_ratio = std::max(e_ratio, ev.e / denom);
      }
      // theta ray at fixed moderate F
      {
        const Matrix3 f = Matrix3::identity();
        const double theta = s;
        const ThermoEval ev = eval(m, minors_vector(f), theta);
        const double denom = energy_scale(m, f, theta);
        eta_ratio = std::max(eta_ratio, std::abs(ev.dpsi_dtheta) / denom);
        sigma_ratio = std::max(sigma_ratio, ev.sigma.frobenius() / denom);
        e_ratio = std::max(e_ratio, ev.e / denom);
      }
      if (prev_eta >= 0.0 && eta_ratio > prev_eta * 1.0001) decay_eta = false;
      if (prev_sigma >= 0.0 && sigma_ratio > prev_sigma * 1.0001) decay_sigma = false;
      if (first_rung) {
        eta_first = eta_ratio;
        sigma_first = sigma_ratio;
        e_ray_first = e_ratio;
        first_rung = false;
      }
      prev_eta = eta_ratio;
      prev_sigma = sigma_ratio;
      eta_last = eta_ratio;
      sigma_last = sigma_ratio;
      e_ray_last = e_ratio;
    }
  }

  const double lo_thresh = 1e-8, hi_thresh = 1e8;
  rep.conditions.push_back(
      {"internal energy ratio", e_inf, std::max(e_sup, e_ray_last),
       e_inf > lo_thresh && e_sup < hi_thresh && e_ray_last <= 2.0 * e_ray_first + 1e-12,
       "sup includes ray ladder; bounded growth required along rays"});
  rep.conditions.push_back({"free energy ratio", psi_inf, psi_sup, psi_sup < hi_thresh,
                            "lower bound reported per-region only; theta-concave models cannot "
                            "dominate theta^ell globally"});
  rep.conditions.push_back({"|psi_theta| decay", eta_last, eta_first,
                            decay_eta && eta_last < 0.5 * eta_first, "ray ladder, inf=last sup=first"});
  rep.conditions.push_back({"|Sigma| decay", sigma_last, sigma_first,
                            decay_sigma && sigma_last < 0.5 * sigma_first,
                            "ray ladder, inf=last sup=first"});
  rep.conditions.push_back({"|psi_xi|/|psi| bound", 0.0, g5_sup, g5_sup < hi_thresh,
                            "compact-region hypothesis"});
  return rep;
}

}  // namespace polytherm
