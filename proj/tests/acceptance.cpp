// Acceptance gate: one self-contained check per shipped guarantee, one
// printed line each. The process exits nonzero if any line reports FAIL.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "polytherm/augmented.hpp"
#include "polytherm/minors.hpp"
#include "polytherm/relent.hpp"
#include "polytherm/solver.hpp"
#include "polytherm/weak_limits.hpp"

using namespace polytherm;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %-28s %s  (%s)\n", num, name.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Matrix3 random_matrix(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix3 m;
  for (auto& a : m.a) a = u(rng);
  return m;
}

Matrix3 random_near_identity(std::mt19937_64& rng, double scale) {
  Matrix3 m = random_matrix(rng, scale);
  for (int d = 0; d < 3; ++d) m(d, d) += 1.0;
  return m;
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

InitialData pulse_init(double ua, double va, double theta0) {
  InitialData init;
  init.displacement = [ua](const Vec3& x) -> Vec3 {
    return {ua * std::sin(2.0 * M_PI * x[1]), ua * std::sin(2.0 * M_PI * x[2]),
            ua * std::sin(2.0 * M_PI * x[0])};
  };
  init.velocity = [va](const Vec3& x) -> Vec3 {
    return {va * std::sin(2.0 * M_PI * x[0]), va * std::sin(2.0 * M_PI * x[1]),
            va * std::sin(2.0 * M_PI * x[2])};
  };
  init.temperature = [theta0](const Vec3&) { return theta0; };
  return init;
}

// ---------------------------------------------------------------------------

void criterion1_null_lagrangian() {
  auto residual_at = [](int n) {
    PeriodicField u(Grid(n), 3);
    u.fill([](const Vec3& x, int c) {
      return 0.05 * std::sin(2.0 * M_PI * (x[c] + x[(c + 1) % 3]));
    });
    return max_abs(piola_residual(u));
  };
  const double order = std::log2(residual_at(16) / residual_at(32));

  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const Matrix3 f = random_matrix(rng, 1.0);
    const Matrix3 lhs = matmul(f, cofactor(f).transpose());
    const double d = determinant(f);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(lhs(i, j) - (i == j ? d : 0.0)));
  }
  report(1, "null_lagrangian_identities", order >= 1.9 && worst <= 1e-12,
         "piola order " + fmt(order) + ", F cofF^T - detF Id <= " + fmt(worst));
}

void criterion2_thermo_consistency() {
  const EnergyModel m = EnergyModel::defaults();
  std::mt19937_64 rng(43);
  bool identities = true, concavity = true;
  for (int s = 0; s < 2000; ++s) {
    MinorsVector xi = minors_vector(random_near_identity(rng, 0.5));
    const double theta = 0.4 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const ThermoEval ev = eval(m, xi, theta);
    if (std::abs(ev.eta + ev.dpsi_dtheta) > 1e-14 * (1.0 + std::abs(ev.eta))) identities = false;
    if (std::abs(ev.e - (ev.psi + theta * ev.eta)) > 1e-13 * (1.0 + std::abs(ev.e)))
      identities = false;
    if (!(ev.d2psi_dtheta2 < 0.0)) concavity = false;  // also eta_theta = -psi_thetatheta > 0
  }

  // Finite-difference order of the analytic xi-gradient.
  const MinorsVector xi0 = minors_vector(random_near_identity(rng, 0.4));
  const double theta0 = 1.2;
  const MinorsVector grad0 = eval(m, xi0, theta0).dpsi_dxi;
  auto fd_err = [&](double h) {
    double worst = 0.0;
    for (int b = 0; b < kMinorsDim; ++b) {
      MinorsVector xp = xi0, xm = xi0;
      xp.set_component(b, xi0.component(b) + h);
      xm.set_component(b, xi0.component(b) - h);
      const double fd = (free_energy(m, xp, theta0) - free_energy(m, xm, theta0)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - grad0.component(b)));
    }
    return worst;
  };
  const double order = std::log2(fd_err(1e-3) / fd_err(5e-4));
  report(2, "thermodynamic_consistency", identities && concavity && order >= 1.9,
         std::string("identities ") + (identities ? "exact" : "BROKEN") + ", fd order " +
             fmt(order) + ", concavity " + (concavity ? "ok" : "BROKEN"));
}

void criterion3_symmetrizability() {
  const EnergyModel m = EnergyModel::defaults();
  std::mt19937_64 rng(44);
  double worst_pair = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const Matrix3 f = random_near_identity(rng, 0.3);
    const Vec3 v = random_vec(rng, 0.8);
    const double theta = 0.6 + 1.4 * std::uniform_real_distribution<double>(0, 1)(rng);
    const EntropyPairResidual r = check_entropy_pair(f, v, theta, m);
    worst_pair = std::max(worst_pair, std::max(r.r_entropy, r.r_flux));
  }
  double min_eig = 1e300;
  for (int s = 0; s < 20; ++s) {
    AugmentedState u;
    u.xi = minors_vector(random_near_identity(rng, 0.2));
    u.v = random_vec(rng, 0.5);
    u.theta = 0.8 + 0.4 * std::uniform_real_distribution<double>(0, 1)(rng);
    min_eig = std::min(min_eig, symmetric_hessian_min_eig(conserved(u, m), m));
  }
  report(3, "symmetrizability", worst_pair <= 1e-6 && min_eig > 0.0,
         "entropy-pair residual <= " + fmt(worst_pair) + ", min eig " + fmt(min_eig));
}

void criterion4_energy_entropy_structure() {
  SolverConfig base;
  base.grid = Grid(16);
  base.t_end = 0.05;
  base.snapshot_stride = 5;
  const InitialData init = pulse_init(0.02, 0.05, 1.0);

  // Inviscid conservation.
  const Trajectory inviscid = run(base, init);
  double e_drift = 0.0;
  const double e0 = inviscid.diag.front().energy;
  for (const auto& row : inviscid.diag)
    e_drift = std::max(e_drift, std::abs(row.energy - e0) / std::abs(e0));

  // Viscous ladder: entropy monotone, energy bounded, dissipation decaying.
  bool entropy_ok = true, bound_ok = true;
  std::vector<double> total_diss;
  for (double coeff : {1e-2, 1e-3, 1e-4}) {
    SolverConfig cfg = base;
    cfg.coeff.mu0 = coeff;
    cfg.coeff.k0 = coeff;
    cfg.snapshot_stride = 2;
    const Trajectory traj = run(cfg, init);
    const double scale = std::abs(traj.diag.front().entropy) + 1.0;
    double diss = 0.0;
    for (std::size_t i = 1; i < traj.diag.size(); ++i) {
      const auto& a = traj.diag[i - 1];
      const auto& b = traj.diag[i];
      if (b.entropy < a.entropy - 1e-8 * scale) entropy_ok = false;
      diss += 0.5 * (b.t - a.t) *
              (a.diss_visc + a.diss_heat + b.diss_visc + b.diss_heat);
    }
    const double ev0 = traj.diag.front().energy;
    for (const auto& row : traj.diag)
      if (row.energy > ev0 + 1e-6 * (std::abs(ev0) + 1.0)) bound_ok = false;
    total_diss.push_back(diss);
  }
  bool decay_ok = true;
  for (std::size_t i = 1; i < total_diss.size(); ++i)
    if (total_diss[i] > 1.05 * total_diss[i - 1]) decay_ok = false;
  if (!(total_diss.back() < total_diss.front())) decay_ok = false;

  report(4, "energy_entropy_structure",
         e_drift <= 1e-6 && entropy_ok && bound_ok && decay_ok,
         "inviscid drift " + fmt(e_drift) + ", diffusion pairings " + fmt(total_diss[0]) + " > " +
             fmt(total_diss[1]) + " > " + fmt(total_diss[2]));
}

void criterion5_relative_entropy() {
  const EnergyModel m = EnergyModel::defaults();
  std::mt19937_64 rng(45);
  bool diag_zero = true, vel_exact = true, positive = true;
  for (int s = 0; s < 1000; ++s) {
    const Matrix3 f = random_near_identity(rng, 0.4);
    const Vec3 v = random_vec(rng, 1.0);
    const double theta = 0.5 + 1.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    if (rel_entropy_I(f, v, theta, f, v, theta, m) != 0.0) diag_zero = false;
    const Vec3 vb = random_vec(rng, 1.0);
    const Vec3 dv = v - vb;
    const double kin = 0.5 * dot(dv, dv);
    const double got = rel_entropy_I(f, v, theta, f, vb, theta, m);
    if (std::abs(got - kin) > 1e-14 * (1.0 + kin)) vel_exact = false;
  }
  for (int s = 0; s < 100000; ++s) {
    const Matrix3 f = random_near_identity(rng, 0.4);
    const Matrix3 fb = random_near_identity(rng, 0.4);
    const Vec3 v = random_vec(rng, 1.0);
    const Vec3 vb = random_vec(rng, 1.0);
    const double th = 0.5 + 1.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double thb = 0.5 + 1.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    if (rel_entropy_I(f, v, th, fb, vb, thb, m) < 0.0) positive = false;
  }
  const Matrix3 fb = random_near_identity(rng, 0.2);
  const Vec3 vb = random_vec(rng, 0.5);
  const Matrix3 df = random_matrix(rng, 1.0);
  const Vec3 dv = random_vec(rng, 1.0);
  auto i_at = [&](double a) {
    Matrix3 f = fb;
    for (int k = 0; k < 9; ++k) f.a[static_cast<std::size_t>(k)] += a * df.a[static_cast<std::size_t>(k)];
    return rel_entropy_I(f, vb + a * dv, 1.1 + 0.7 * a, fb, vb, 1.1, m);
  };
  const double expo = std::log10(i_at(1e-2) / i_at(1e-3));
  report(5, "relative_entropy_structure",
         diag_zero && vel_exact && positive && std::abs(expo - 2.0) <= 0.05,
         std::string("diagonal ") + (diag_zero ? "exact" : "BROKEN") + ", exponent " + fmt(expo));
}

void criterion6_lemma_certificates() {
  const EnergyModel m = EnergyModel::defaults();
  const double regions[3][2] = {{1.0, 0.5}, {2.0, 0.5}, {2.0, 0.1}};
  bool all_ok = true;
  double worst_drift = 0.0;
  for (const auto& rg : regions) {
    RegionGamma region;
    region.m = rg[0];
    region.delta = rg[1];
    for (const BoundReport& rep :
         {lemma1_check(m, region, 16.0, 10000, 42), lemma2_check(m, region, 16.0, 10000, 42),
          lemma3_check(m, region, 1.0, 0.1, 10000, 42)}) {
      if (!rep.all_pass()) all_ok = false;
      for (const auto& est : rep.estimates) {
        worst_drift = std::max(worst_drift, est.drift());
        if (est.drift() > 0.10) all_ok = false;
      }
    }
  }
  report(6, "lemma_certificates", all_ok, "worst sample-doubling drift " + fmt(worst_drift));
}

void criterion7_gronwall_envelope() {
  SolverConfig cfg;
  cfg.grid = Grid(16);
  cfg.t_end = 0.05;
  cfg.snapshot_stride = 2;
  const InitialData init = pulse_init(0.02, 0.05, 1.0);

  RelEntropyReport reps[2];
  const double amps[2] = {1e-2, 1e-3};
  bool envelopes = true;
  for (int k = 0; k < 2; ++k) {
    WeakStrongOptions opt;
    opt.perturb_amplitude = amps[k];
    reps[k] = weak_strong_experiment(cfg, init, opt);
    if (!reps[k].envelope_pass || reps[k].slack > 0.05) envelopes = false;
  }
  auto rel_var = [](double a, double b) {
    return std::abs(a - b) / std::max(std::max(std::abs(a), std::abs(b)), 1e-12);
  };
  const double var_c1 = rel_var(reps[0].c1, reps[1].c1);
  const double var_c2 = rel_var(reps[0].c2, reps[1].c2);

  std::vector<double> finals;
  bool ladder_ok = true;
  for (double mu : {1e-2, 1e-3, 1e-4}) {
    WeakStrongOptions opt;
    opt.perturb_amplitude = 0.0;
    opt.mu0 = mu;
    opt.k0 = mu;
    const RelEntropyReport rep = weak_strong_experiment(cfg, init, opt);
    finals.push_back(rep.integrated.back());
  }
  for (std::size_t i = 1; i < finals.size(); ++i)
    if (finals[i] > finals[i - 1]) ladder_ok = false;

  report(7, "gronwall_envelope", envelopes && var_c1 <= 0.2 && var_c2 <= 0.2 && ladder_ok,
         "c1 var " + fmt(var_c1) + ", c2 var " + fmt(var_c2) + ", ladder " +
             fmt(finals[0]) + " > " + fmt(finals[1]) + " > " + fmt(finals[2]));
}

void criterion8_weak_limit_lab() {
  // Transport residual order under joint space-time refinement.
  const TestFunction phi = TestFunction::trig_mode({1, 0, 1}, 0.7, 1.0);
  auto worst_at = [&](int n, double dt) {
    std::vector<double> times;
    std::vector<PeriodicField> snaps;
    for (int k = 0; k < 5; ++k) {
      const double t = k * dt;
      times.push_back(t);
      PeriodicField u(Grid(n), 3);
      const double gt = 1.0 + 0.5 * std::sin(3.0 * t);
      u.fill([&](const Vec3& x, int c) {
        return 0.1 * gt * std::sin(2.0 * M_PI * (x[c] + x[(c + 1) % 3]));
      });
      snaps.push_back(u);
    }
    const TransportResiduals r = transport_identity_residual(snaps, times, phi);
    return std::max(r.cof_eq, r.det_eq);
  };
  const double order = std::log2(worst_at(16, 0.04) / worst_at(32, 0.02));

  SequenceSpec p4;
  p4.kind = SequenceKind::oscillatory;
  p4.grid = Grid(64);
  p4.p = 4.0;
  p4.epsilons = {0.5, 0.25, 0.125};
  const WeakLimitTable t4 = minors_weak_limit_test(p4);

  SequenceSpec p2;
  p2.kind = SequenceKind::concentrating;
  p2.grid = Grid(64);
  p2.p = 2.0;
  p2.amplitude = 1.0;
  p2.epsilons = {0.4, 0.3, 0.2};
  const WeakLimitTable t2 = minors_weak_limit_test(p2);
  // The counter-demo must violate the det hypothesis, reported as expected.
  const bool counter_demo = !t2.det_pass;

  report(8, "weak_limit_lab",
         order >= 1.9 && t4.cof_pass && t4.det_pass && counter_demo,
         "transport order " + fmt(order) + ", p4 gaps decay, p2 det gap EXPECTED-FAIL " +
             (counter_demo ? "observed" : "MISSING"));
}

void criterion9_concentration_lab() {
  const Grid g(64);
  const double sigma = 0.2;
  const Vec3 x0{8.5 / 16.0, 8.5 / 16.0, 8.5 / 16.0};  // a coarse-cell center
  auto energy_at = [&](double n) {
    const TestFunction bump = TestFunction::periodized_gaussian(x0, sigma / n);
    PeriodicField e(g, 1);
    e.fill([&](const Vec3& x, int) {
      const double v = std::pow(n, 1.5) * bump.value(x, 0.0);
      return 0.5 * v * v;
    });
    return e;
  };
  std::vector<PeriodicField> ladder = {energy_at(1.0), energy_at(4.0), energy_at(8.0)};
  const ConcentrationEstimate est = estimate_concentration(ladder, 16);
  const double exact = 0.5 * std::pow(sigma, 3.0) * std::pow(M_PI, 1.5);
  const double mass_err = std::abs(est.total_mass - exact) / exact;

  // Oscillatory velocities are equi-integrable: no concentration mass.
  std::vector<PeriodicField> osc;
  for (int k : {2, 4, 8}) {
    PeriodicField e(g, 1);
    e.fill([&](const Vec3& x, int) {
      const double v = 0.5 * std::sin(2.0 * M_PI * k * x[0]);
      return 0.5 * v * v;
    });
    osc.push_back(e);
  }
  const double osc_energy = 0.5 * 0.25 * 0.5;
  const double osc_mass = estimate_concentration(osc, 16).total_mass / osc_energy;

  // Averaged energy identity: the weak limit of the velocities is zero, so
  // the pairing of the energy density must be carried by gamma alone.
  const TestFunction phi = TestFunction::trig_mode({1, 0, 0}, 0.9, 1.0);
  const double direct = pair_space(ladder.back(), {1.0}, phi, 0.0);
  double via_gamma = 0.0;
  for (int i1 = 0; i1 < 16; ++i1)
    for (int i2 = 0; i2 < 16; ++i2)
      for (int i3 = 0; i3 < 16; ++i3) {
        const Vec3 c{(i1 + 0.5) / 16.0, (i2 + 0.5) / 16.0, (i3 + 0.5) / 16.0};
        via_gamma += est.cell_mass[static_cast<std::size_t>((i1 * 16 + i2) * 16 + i3)] *
                     phi.value(c, 0.0);
      }
  const double with_gamma_err = std::abs(direct - via_gamma) / std::abs(direct);
  const double without_gamma_err = std::abs(direct - 0.0) / std::abs(direct);

  report(9, "concentration_lab",
         mass_err <= 0.05 && osc_mass <= 0.01 && with_gamma_err <= 0.05 &&
             without_gamma_err > 0.05,
         "gamma mass err " + fmt(mass_err) + ", oscillatory fraction " + fmt(osc_mass) +
             ", identity closes to " + fmt(with_gamma_err) + " with gamma only");
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(POLYTHERM_BIN) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10_reproducibility() {
  const std::string tmp = POLYTHERM_TEST_TMP;
  const std::string cfgdir = POLYTHERM_CONFIG_DIR;
  bool ok = true;
  std::string detail;

  const std::string c1 = tmp + "/acc_check_1", c2 = tmp + "/acc_check_2";
  ok = ok && run_cli("check --out " + c1) == 0 && run_cli("check --out " + c2) == 0;
  const std::string check_a = slurp(c1 + "/check.csv");
  ok = ok && !check_a.empty() && check_a == slurp(c2 + "/check.csv");
  detail += std::string("check.csv ") + (ok ? "identical" : "DIFFERS");

  const std::string b1 = tmp + "/acc_bounds_1", b2 = tmp + "/acc_bounds_2";
  const std::string bounds_cfg = cfgdir + "/bounds_demo.cfg";
  ok = ok && run_cli("bounds --config " + bounds_cfg + " --seed 7 --out " + b1) == 0;
  ok = ok && run_cli("bounds --config " + bounds_cfg + " --seed 7 --out " + b2) == 0;
  const std::string bounds_a = slurp(b1 + "/bounds.csv");
  const bool bounds_same = !bounds_a.empty() && bounds_a == slurp(b2 + "/bounds.csv");
  ok = ok && bounds_same;
  detail += std::string(", bounds.csv ") + (bounds_same ? "identical" : "DIFFERS");

  const std::string s1 = tmp + "/acc_sim_1", s2 = tmp + "/acc_sim_2";
  const std::string sim_cfg = cfgdir + "/viscous_decay.cfg";
  ok = ok && run_cli("simulate --config " + sim_cfg + " --out " + s1) == 0;
  ok = ok && run_cli("simulate --config " + sim_cfg + " --out " + s2) == 0;
  const std::string diag_a = slurp(s1 + "/diagnostics.csv");
  const bool sim_same = !diag_a.empty() && diag_a == slurp(s2 + "/diagnostics.csv");
  ok = ok && sim_same;
  detail += std::string(", diagnostics.csv ") + (sim_same ? "identical" : "DIFFERS");

  report(10, "reproducibility", ok, detail);
}

}  // namespace

int main() {
  criterion1_null_lagrangian();
  criterion2_thermo_consistency();
  criterion3_symmetrizability();
  criterion4_energy_entropy_structure();
  criterion5_relative_entropy();
  criterion6_lemma_certificates();
  criterion7_gronwall_envelope();
  criterion8_weak_limit_lab();
  criterion9_concentration_lab();
  criterion10_reproducibility();
  if (g_failures > 0) {
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
