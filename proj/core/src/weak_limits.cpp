#include "polytherm/weak_limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polytherm/errors.hpp"
#include "polytherm/minors.hpp"

namespace polytherm {

namespace {

Matrix3 node_matrix(const PeriodicField& f, std::int64_t node) {
  Matrix3 m;
  for (int k = 0; k < 9; ++k) m.a[static_cast<std::size_t>(k)] = f.at(node, k);
  return m;
}

Vec3 node_vec(const PeriodicField& f, std::int64_t node) {
  return {f.at(node, 0), f.at(node, 1), f.at(node, 2)};
}

/// Quadrature of sum_nodes w(x, node) over the torus.
template <typename Fn>
double quad(const Grid& g, Fn&& w) {
  double s = 0.0;
  for (int i1 = 0; i1 < g.dims[0]; ++i1)
    for (int i2 = 0; i2 < g.dims[1]; ++i2)
      for (int i3 = 0; i3 < g.dims[2]; ++i3) s += w(g.coords(i1, i2, i3), g.index(i1, i2, i3));
  return s * g.cell_volume();
}

}  // namespace

TransportResiduals transport_identity_residual(const std::vector<PeriodicField>& u_snapshots,
                                               const std::vector<double>& times,
                                               const TestFunction& phi) {
  return transport_identity_residual(u_snapshots, {}, times, phi);
}

TransportResiduals transport_identity_residual(const std::vector<PeriodicField>& u_snapshots,
                                               const std::vector<Matrix3>& backgrounds,
                                               const std::vector<double>& times,
                                               const TestFunction& phi) {
  if (u_snapshots.size() != times.size() || u_snapshots.size() < 3)
    throw std::invalid_argument("need matching snapshot and time lists, at least 3 entries");
  if (!backgrounds.empty() && backgrounds.size() != u_snapshots.size())
    throw std::invalid_argument("background list must match the snapshot list");
  const Grid& g = u_snapshots.front().grid();
  const auto bg = [&](std::size_t k) {
    return backgrounds.empty() ? Matrix3::zero() : backgrounds[k];
  };
  TransportResiduals out;

  for (std::size_t k = 1; k + 1 < u_snapshots.size(); ++k) {
    const double t = times[k];
    const double inv2dt = 1.0 / (times[k + 1] - times[k - 1]);
    const auto f_at = [&](std::size_t level) {
      PeriodicField f = deformation_gradient(u_snapshots[level]);
      const Matrix3 b = bg(level);
      for (std::int64_t node = 0; node < g.num_nodes(); ++node)
        for (int c = 0; c < 9; ++c) f.at(node, c) += b.a[static_cast<std::size_t>(c)];
      return f;
    };
    const PeriodicField fm = f_at(k - 1);
    const PeriodicField fp = f_at(k + 1);
    const PeriodicField f0 = f_at(k);
    // central-difference velocity: periodic part w plus the affine rate db x
    PeriodicField w(g, 3);
    for (std::size_t n = 0; n < w.values().size(); ++n)
      w.values()[n] = (u_snapshots[k + 1].values()[n] - u_snapshots[k - 1].values()[n]) * inv2dt;
    const Matrix3 db = inv2dt * (bg(k + 1) - bg(k - 1));
    const bool affine = !backgrounds.empty();

    // d_t F_{i alpha} = d_alpha v_i: the periodic part of v moves onto
    // grad phi, the affine rate pairs directly.
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a) {
        const double r = quad(g, [&](const Vec3& x, std::int64_t node) {
          const double dtf = (fp.at(node, 3 * i + a) - fm.at(node, 3 * i + a)) * inv2dt;
          return (dtf - db(i, a)) * phi.value(x, t) +
                 w.at(node, i) * phi.gradient(x, t)[static_cast<std::size_t>(a)];
        });
        out.f_eq = std::max(out.f_eq, std::abs(r));
      }

    PeriodicField gradf;  // d_alpha F_{j beta}, component (3j + beta)*3 + alpha
    if (affine) gradf = grad(f0);

    // d_t (cof F)_{k gamma} = d_alpha(eps_{ijk} eps_{alpha beta gamma} F_{j beta} v_i)
    for (int kk = 0; kk < 3; ++kk)
      for (int gg = 0; gg < 3; ++gg) {
        const double r = quad(g, [&](const Vec3& x, std::int64_t node) {
          const Matrix3 cm = cofactor(node_matrix(fm, node));
          const Matrix3 cp = cofactor(node_matrix(fp, node));
          const double dtc = (cp(kk, gg) - cm(kk, gg)) * inv2dt;
          const Matrix3 f = node_matrix(f0, node);
          const Vec3 gphi = phi.gradient(x, t);
          const double p = phi.value(x, t);
          double s = dtc * p;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                  const double ee = levi_civita(i, j, kk) * levi_civita(a, b, gg);
                  if (ee == 0.0) continue;
                  s += ee * f(j, b) * w.at(node, i) * gphi[static_cast<std::size_t>(a)];
                  if (affine) {
                    double bx = 0.0;
                    for (int m = 0; m < 3; ++m) bx += db(i, m) * x[static_cast<std::size_t>(m)];
                    s -= ee * (gradf.at(node, (3 * j + b) * 3 + a) * bx + f(j, b) * db(i, a)) * p;
                  }
                }
          return s;
        });
        out.cof_eq = std::max(out.cof_eq, std::abs(r));
      }

    // d_t det F = d_alpha((cof F)_{i alpha} v_i)
    PeriodicField coff(g, 9);
    for (std::int64_t node = 0; node < g.num_nodes(); ++node) {
      const Matrix3 c = cofactor(node_matrix(f0, node));
      for (int cc = 0; cc < 9; ++cc) coff.at(node, cc) = c.a[static_cast<std::size_t>(cc)];
    }
    PeriodicField divcof;
    if (affine) divcof = div(coff);
    const double r = quad(g, [&](const Vec3& x, std::int64_t node) {
      const double dtd =
          (determinant(node_matrix(fp, node)) - determinant(node_matrix(fm, node))) * inv2dt;
      const Matrix3 c = node_matrix(coff, node);
      const Vec3 gphi = phi.gradient(x, t);
      const double p = phi.value(x, t);
      double s = dtd * p;
      for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
          s += c(i, a) * w.at(node, i) * gphi[static_cast<std::size_t>(a)];
      if (affine) {
        s -= ddot(c, db) * p;
        for (int i = 0; i < 3; ++i) {
          double bx = 0.0;
          for (int m = 0; m < 3; ++m) bx += db(i, m) * x[static_cast<std::size_t>(m)];
          s -= bx * divcof.at(node, i) * p;
        }
      }
      return s;
    });
    out.det_eq = std::max(out.det_eq, std::abs(r));
  }
  return out;
}

namespace {

/// Componentwise wrap of x - x0 into [-1/2, 1/2).
Vec3 wrapped_offset(const Vec3& x, const Vec3& x0) {
  Vec3 d;
  for (int c = 0; c < 3; ++c) {
    double w = x[static_cast<std::size_t>(c)] - x0[static_cast<std::size_t>(c)];
    d[static_cast<std::size_t>(c)] = w - std::round(w);
  }
  return d;
}

/// Compactly supported bump profile used by the concentrating family. The
/// off-center factor (z - c0) keeps the first moment of det(grad P) away from
/// zero; with a centered profile the signal paired against grad phi would
/// vanish by symmetry.
Vec3 bump_profile(const Vec3& z) {
  const Vec3 c0{0.3, 0.1, 0.0};
  const double s = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  if (s >= 1.0) return {0.0, 0.0, 0.0};
  const double q = std::exp(1.0 - 1.0 / (1.0 - s));
  return {q * (z[0] - c0[0]), q * (z[1] - c0[1]), q * (z[2] - c0[2])};
}

}  // namespace

PeriodicField sequence_displacement(const SequenceSpec& seq, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  PeriodicField u(seq.grid, 3);
  const double a = seq.amplitude;
  switch (seq.kind) {
    case SequenceKind::constant:
      u.fill([&](const Vec3& x, int c) {
        return c == 0 ? a * std::sin(2.0 * M_PI * x[0]) : 0.0;
      });
      break;
    case SequenceKind::oscillatory: {
      const double inv = 1.0 / epsilon;
      if (std::abs(inv - std::round(inv)) > 1e-9 * inv)
        throw std::invalid_argument("oscillatory ladder needs 1/epsilon integer");
      if (epsilon * seq.grid.dims[0] < 8.0)
        throw std::invalid_argument("oscillation period under 8 nodes is unresolved");
      u.fill([&](const Vec3& x, int c) {
        return c == 0 ? epsilon * a * std::sin(2.0 * M_PI * x[0] / epsilon) : 0.0;
      });
      break;
    }
    case SequenceKind::concentrating: {
      int nmin = seq.grid.dims[0];
      for (int d = 1; d < 3; ++d) nmin = std::min(nmin, seq.grid.dims[d]);
      if (2.0 * epsilon * nmin < 8.0)
        throw std::invalid_argument("bump support under 8 nodes is unresolved");
      const double scale = a * std::pow(epsilon, 1.0 - 3.0 / seq.p);
      u.fill([&](const Vec3& x, int c) {
        Vec3 z = wrapped_offset(x, seq.center);
        for (auto& w : z) w /= epsilon;
        return scale * bump_profile(z)[static_cast<std::size_t>(c)];
      });
      break;
    }
  }
  return u;
}

PeriodicField sequence_limit_displacement(const SequenceSpec& seq) {
  if (seq.kind == SequenceKind::constant)
    return sequence_displacement(seq, 1.0);
  return PeriodicField(seq.grid, 3);
}

double sequence_gradient_lp(const SequenceSpec& seq, double epsilon) {
  return lp_norm(grad(sequence_displacement(seq, epsilon)), seq.p);
}

WeakLimitTable minors_weak_limit_test(const SequenceSpec& seq) {
  if (seq.epsilons.empty()) throw std::invalid_argument("empty epsilon ladder");
  WeakLimitTable table;
  const Grid& g = seq.grid;

  const auto observables = [&](const PeriodicField& u) {
    const PeriodicField f = deformation_gradient(u);
    PeriodicField obs(g, 11);  // cof (9), det, (F_11)^2
    for (std::int64_t node = 0; node < g.num_nodes(); ++node) {
      const Matrix3 fm = node_matrix(f, node);
      const Matrix3 c = cofactor(fm);
      for (int k = 0; k < 9; ++k) obs.at(node, k) = c.a[static_cast<std::size_t>(k)];
      obs.at(node, 9) = determinant(fm);
      obs.at(node, 10) = fm(0, 0) * fm(0, 0);
    }
    return obs;
  };
  const PeriodicField limit_obs = observables(sequence_limit_displacement(seq));

  for (double eps : seq.epsilons) {
    const PeriodicField obs = observables(sequence_displacement(seq, eps));
    WeakLimitRow row;
    row.epsilon = eps;
    for (const TestFunction& phi : test_catalog()) {
      for (int c = 0; c < 11; ++c) {
        const double gap = quad(g, [&](const Vec3& x, std::int64_t node) {
          return (obs.at(node, c) - limit_obs.at(node, c)) * phi.value(x, 0.0);
        });
        if (c < 9)
          row.cof_gap = std::max(row.cof_gap, std::abs(gap));
        else if (c == 9)
          row.det_gap = std::max(row.det_gap, std::abs(gap));
        else
          row.contrast_gap = std::max(row.contrast_gap, std::abs(gap));
      }
    }
    table.rows.push_back(row);
  }
  table.cof_pass = table.rows.back().cof_gap <= 0.5 * table.rows.front().cof_gap;
  table.det_pass = table.rows.back().det_gap <= 0.5 * table.rows.front().det_gap;
  return table;
}

TwoRoute cofactor_two_route(const PeriodicField& u, const TestFunction& phi, int i, int alpha) {
  const Grid& g = u.grid();
  const PeriodicField f = deformation_gradient(u);
  const PeriodicField gu = grad(u);  // component k*3 + gamma = d_gamma u_k
  TwoRoute out;

  out.direct = quad(g, [&](const Vec3& x, std::int64_t node) {
    return cofactor(node_matrix(f, node))(i, alpha) * phi.value(x, 0.0);
  });

  // cof(grad y)_{i alpha} = 1/2 eps_{ijk} eps_{alpha beta gamma} d_beta(y_j d_gamma y_k)
  // with y = x + u. The x-only part is delta_{i alpha}; the mixed part loses
  // its second-derivative piece to the eps antisymmetry (discrete centered
  // derivatives commute), and the periodic part moves onto grad phi.
  out.via_divergence = quad(g, [&](const Vec3& x, std::int64_t node) {
    const double p = phi.value(x, 0.0);
    const Vec3 gp = phi.gradient(x, 0.0);
    double s = (i == alpha) ? p : 0.0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int b = 0; b < 3; ++b)
          for (int gg = 0; gg < 3; ++gg) {
            const double ee = levi_civita(i, j, k) * levi_civita(alpha, b, gg);
            if (ee == 0.0) continue;
            if (j == b) s += 0.5 * ee * gu.at(node, 3 * k + gg) * p;
            double w = (k == gg) ? u.at(node, j) : 0.0;
            w += u.at(node, j) * gu.at(node, 3 * k + gg);
            s -= 0.5 * ee * w * gp[static_cast<std::size_t>(b)];
          }
    return s;
  });
  return out;
}

TwoRoute determinant_two_route(const PeriodicField& u, const TestFunction& phi) {
  const Grid& g = u.grid();
  const PeriodicField f = deformation_gradient(u);
  TwoRoute out;

  out.direct = quad(g, [&](const Vec3& x, std::int64_t node) {
    return determinant(node_matrix(f, node)) * phi.value(x, 0.0);
  });

  // det(grad y) = 1/3 d_alpha((cof grad y)_{i alpha} y_i). Split cof = I + C
  // and y = x + u: the x C-part keeps x as a plain quadrature weight on the
  // discrete divergence of C (the Piola defect), the periodic parts move onto
  // grad phi.
  PeriodicField cprime(g, 9);
  for (std::int64_t node = 0; node < g.num_nodes(); ++node) {
    const Matrix3 c = cofactor(node_matrix(f, node)) - Matrix3::identity();
    for (int k = 0; k < 9; ++k) cprime.at(node, k) = c.a[static_cast<std::size_t>(k)];
  }
  const PeriodicField divc = div(cprime);

  out.via_divergence = quad(g, [&](const Vec3& x, std::int64_t node) {
    const double p = phi.value(x, 0.0);
    const Vec3 gp = phi.gradient(x, 0.0);
    const Matrix3 c = node_matrix(cprime, node);
    double s = p;
    double trace = 0.0, piola = 0.0, byparts = 0.0;
    for (int i = 0; i < 3; ++i) {
      trace += c(i, i);
      piola += x[static_cast<std::size_t>(i)] * divc.at(node, i);
    }
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a) {
        const double cof_ia = (i == a ? 1.0 : 0.0) + c(i, a);
        byparts += cof_ia * u.at(node, i) * gp[static_cast<std::size_t>(a)];
      }
    s += (trace + piola) / 3.0 * p - byparts / 3.0;
    return s;
  });
  return out;
}

double YoungMeasureEstimate::expect(
    std::int64_t cell, const std::function<double(const std::array<double, 13>&)>& f) const {
  const auto& list = atoms[static_cast<std::size_t>(cell)];
  if (list.empty()) throw std::invalid_argument("empty cell");
  double s = 0.0;
  for (const auto& atom : list) s += f(atom);
  return s / static_cast<double>(list.size());
}

std::vector<double> YoungMeasureEstimate::marginal_histogram(std::int64_t cell, int comp, int bins,
                                                             double lo, double hi) const {
  if (bins < 1 || !(hi > lo)) throw std::invalid_argument("bad histogram range");
  const auto& list = atoms[static_cast<std::size_t>(cell)];
  if (list.empty()) throw std::invalid_argument("empty cell");
  std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
  const double w = 1.0 / static_cast<double>(list.size());
  for (const auto& atom : list) {
    int b = static_cast<int>(std::floor((atom[static_cast<std::size_t>(comp)] - lo) / (hi - lo) *
                                        bins));
    b = std::clamp(b, 0, bins - 1);
    h[static_cast<std::size_t>(b)] += w;
  }
  return h;
}

YoungMeasureEstimate estimate_young_measure(const PeriodicField& f, const PeriodicField& v,
                                            const PeriodicField& theta, int cells_per_axis) {
  const Grid& g = f.grid();
  if (f.components() != 9 || v.components() != 3 || theta.components() != 1)
    throw std::invalid_argument("expected 9 + 3 + 1 state components");
  for (int d = 0; d < 3; ++d)
    if (g.dims[d] % cells_per_axis != 0)
      throw std::invalid_argument("cells must tile the fine grid evenly");

  YoungMeasureEstimate est;
  est.cells = Grid(cells_per_axis, cells_per_axis, cells_per_axis);
  est.atoms.resize(static_cast<std::size_t>(est.cells.num_nodes()));
  for (int i1 = 0; i1 < g.dims[0]; ++i1)
    for (int i2 = 0; i2 < g.dims[1]; ++i2)
      for (int i3 = 0; i3 < g.dims[2]; ++i3) {
        const std::int64_t node = g.index(i1, i2, i3);
        const std::int64_t cell =
            est.cells.index(i1 * cells_per_axis / g.dims[0], i2 * cells_per_axis / g.dims[1],
                            i3 * cells_per_axis / g.dims[2]);
        std::array<double, 13> atom{};
        for (int c = 0; c < 9; ++c) atom[static_cast<std::size_t>(c)] = f.at(node, c);
        for (int c = 0; c < 3; ++c) atom[static_cast<std::size_t>(9 + c)] = v.at(node, c);
        atom[12] = theta.at(node, 0);
        est.atoms[static_cast<std::size_t>(cell)].push_back(atom);
      }
  return est;
}

RecessionResult recession(const Observable& f, double p, double ell,
                          const std::array<double, 13>& direction) {
  double znorm = 0.0;
  for (double w : direction) znorm += w * w;
  znorm = std::sqrt(znorm);
  if (!(znorm > 0.0)) throw std::invalid_argument("zero recession direction");

  const auto state_at = [&](double s) {
    Matrix3 fm;
    double anorm = 0.0;
    for (int k = 0; k < 9; ++k) {
      const double w = direction[static_cast<std::size_t>(k)] * s;
      fm.a[static_cast<std::size_t>(k)] = w;
      anorm += w * w;
    }
    anorm = std::sqrt(anorm);
    if (anorm > 0.0) {
      const double scale = std::pow(anorm, 1.0 / p - 1.0);
      for (double& w : fm.a) w *= scale;
    }
    Vec3 b{direction[9] * s, direction[10] * s, direction[11] * s};
    Vec3 vel{0.0, 0.0, 0.0};
    const double bnorm = norm(b);
    if (bnorm > 0.0)
      for (int k = 0; k < 3; ++k)
        vel[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k)] / std::sqrt(bnorm);
    const double c = std::max(direction[12] * s, 0.0);
    const double theta = std::max(std::pow(c, 1.0 / ell), 1e-6);
    return std::tuple<Matrix3, Vec3, double>(fm, vel, theta);
  };

  RecessionResult out;
  double prev = 0.0;
  int agree = 0;
  double s = 1.0;
  for (int k = 0; k < 40; ++k, s *= 4.0) {
    const auto [fm, vel, theta] = state_at(s);
    const double val = f(fm, vel, theta) / (1.0 + s * znorm);
    if (k > 0 && std::abs(val - prev) <= 1e-3 * (1.0 + std::abs(val)))
      ++agree;
    else
      agree = 0;
    prev = val;
    if (agree >= 3) {
      out.value = val;
      out.converged = true;
      return out;
    }
  }
  out.value = prev;
  return out;
}

ConcentrationEstimate estimate_concentration(const std::vector<PeriodicField>& energy_ladder,
                                             int cells_per_axis, double mass_drift_tol) {
  if (energy_ladder.empty()) throw std::invalid_argument("empty energy ladder");
  for (const PeriodicField& e : energy_ladder)
    if (e.components() != 1) throw std::invalid_argument("energy fields must be scalar");

  ConcentrationEstimate est;
  // truncation level from the coarsest rung
  std::vector<double> sorted = energy_ladder.front().values();
  std::sort(sorted.begin(), sorted.end());
  const std::size_t idx =
      std::min(sorted.size() - 1,
               static_cast<std::size_t>(std::ceil(0.999 * static_cast<double>(sorted.size()))) - 1);
  est.threshold = sorted[idx];

  for (const PeriodicField& e : energy_ladder) {
    double total = 0.0;
    for (double w : e.values()) total += std::max(w - est.threshold, 0.0);
    est.ladder_totals.push_back(total * e.grid().cell_volume());
  }
  est.total_mass = est.ladder_totals.back();

  const PeriodicField& fine = energy_ladder.back();
  const Grid& g = fine.grid();
  for (int d = 0; d < 3; ++d)
    if (g.dims[d] % cells_per_axis != 0)
      throw std::invalid_argument("cells must tile the fine grid evenly");
  est.cells = Grid(cells_per_axis, cells_per_axis, cells_per_axis);
  est.cell_mass.assign(static_cast<std::size_t>(est.cells.num_nodes()), 0.0);
  for (int i1 = 0; i1 < g.dims[0]; ++i1)
    for (int i2 = 0; i2 < g.dims[1]; ++i2)
      for (int i3 = 0; i3 < g.dims[2]; ++i3) {
        const std::int64_t cell =
            est.cells.index(i1 * cells_per_axis / g.dims[0], i2 * cells_per_axis / g.dims[1],
                            i3 * cells_per_axis / g.dims[2]);
        est.cell_mass[static_cast<std::size_t>(cell)] +=
            std::max(fine.at(i1, i2, i3, 0) - est.threshold, 0.0) * g.cell_volume();
      }

  if (est.ladder_totals.size() >= 2) {
    const double a = est.ladder_totals[est.ladder_totals.size() - 2];
    const double b = est.ladder_totals.back();
    est.stable = std::abs(b - a) <= mass_drift_tol * std::max(std::abs(b), 1e-300);
  } else {
    est.stable = true;
  }
  return est;
}

AveragedResiduals averaged_equations_check(const Trajectory& traj, const SolverConfig& cfg,
                                           const TestFunction& phi) {
  if (traj.snapshots.size() < 3) throw std::invalid_argument("need at least 3 snapshots");
  const Grid& g = cfg.grid;
  const std::int64_t nn = g.num_nodes();
  AveragedResiduals out;

  std::vector<PeriodicField> u_snaps;
  std::vector<double> times;
  for (const SimState& s : traj.snapshots) {
    u_snaps.push_back(s.u);
    times.push_back(s.t);
  }
  const TransportResiduals tr = transport_identity_residual(u_snaps, times, phi);
  out.minors_eq = std::max({tr.f_eq, tr.cof_eq, tr.det_eq});

  const auto coeffs_at = [&](double e, double theta) {
    double mu = cfg.coeff.mu0, k = cfg.coeff.k0;
    if (cfg.coeff.state_dependent) {
      mu = cfg.coeff.mu0 * e / (theta + 1.0);
      k = cfg.coeff.k0 * e;
    }
    return std::pair<double, double>(mu, k);
  };

  for (std::size_t k = 1; k + 1 < traj.snapshots.size(); ++k) {
    const SimState& sm = traj.snapshots[k - 1];
    const SimState& s0 = traj.snapshots[k];
    const SimState& sp = traj.snapshots[k + 1];
    const double dtm = s0.t - sm.t, dtp = sp.t - s0.t;
    if (std::abs(dtp - dtm) > 1e-12 * (dtp + dtm)) continue;
    const double inv2dt = 1.0 / (sp.t - sm.t);
    const double t = s0.t;

    const PeriodicField f = deformation_gradient(s0.u);
    const PeriodicField gv = grad(s0.v);
    const PeriodicField gtheta = grad(s0.theta);

    PeriodicField stress(g, 9);
    PeriodicField eflux(g, 3);
    for (std::int64_t node = 0; node < nn; ++node) {
      const Matrix3 fm = node_matrix(f, node);
      const double theta = s0.theta.at(node, 0);
      const ThermoEval ev = eval(cfg.model, minors_vector(fm), theta);
      const auto [mu, kc] = coeffs_at(ev.e, theta);
      for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
          stress.at(node, 3 * i + a) = ev.sigma(i, a) + mu * gv.at(node, 3 * i + a);
      for (int a = 0; a < 3; ++a) {
        double w = kc * gtheta.at(node, a);
        for (int i = 0; i < 3; ++i) w += stress.at(node, 3 * i + a) * s0.v.at(node, i);
        eflux.at(node, a) = w;
      }
    }

    // momentum: <d_t v_i, phi> + <(Sigma + mu grad v)_{i alpha}, d_alpha phi>
    for (int i = 0; i < 3; ++i) {
      const double r = quad(g, [&](const Vec3& x, std::int64_t node) {
        const double dtv = (sp.v.at(node, i) - sm.v.at(node, i)) * inv2dt;
        const Vec3 gp = phi.gradient(x, t);
        double flux = 0.0;
        for (int a = 0; a < 3; ++a)
          flux += stress.at(node, 3 * i + a) * gp[static_cast<std::size_t>(a)];
        return dtv * phi.value(x, t) + flux;
      });
      out.momentum_eq = std::max(out.momentum_eq, std::abs(r));
    }

    // energy: <d_t(1/2|v|^2 + e), phi> + <flux, grad phi> - <r, phi>
    const auto edens = [&](const SimState& s, std::int64_t node, const PeriodicField& fs) {
      double v2 = 0.0;
      for (int i = 0; i < 3; ++i) v2 += s.v.at(node, i) * s.v.at(node, i);
      return 0.5 * v2 +
             internal_energy(cfg.model, minors_vector(node_matrix(fs, node)), s.theta.at(node, 0));
    };
    const PeriodicField fmn = deformation_gradient(sm.u);
    const PeriodicField fpn = deformation_gradient(sp.u);
    const double r = quad(g, [&](const Vec3& x, std::int64_t node) {
      const double dte = (edens(sp, node, fpn) - edens(sm, node, fmn)) * inv2dt;
      const Vec3 gp = phi.gradient(x, t);
      double flux = 0.0;
      for (int a = 0; a < 3; ++a) flux += eflux.at(node, a) * gp[static_cast<std::size_t>(a)];
      return dte * phi.value(x, t) + flux - cfg.heat_supply * phi.value(x, t);
    });
    out.energy_eq = std::max(out.energy_eq, std::abs(r));
  }
  return out;
}

}  // namespace polytherm
