#include "polytherm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polytherm {

bool PeriodicField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

PeriodicField deriv(const PeriodicField& f, int axis) {
  const Grid& g = f.grid();
  const int c = f.components();
  PeriodicField out(g, c);
  if (g.dims[axis] == 1) return out;  // collapsed axis
  const double inv2h = 0.5 * g.dims[axis];
  const int n1 = g.dims[0], n2 = g.dims[1], n3 = g.dims[2];
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2)
      for (int i3 = 0; i3 < n3; ++i3) {
        int p1 = i1, p2 = i2, p3 = i3, m1 = i1, m2 = i2, m3 = i3;
        if (axis == 0) {
          p1 = (i1 + 1) % n1;
          m1 = (i1 + n1 - 1) % n1;
        } else if (axis == 1) {
          p2 = (i2 + 1) % n2;
          m2 = (i2 + n2 - 1) % n2;
        } else {
          p3 = (i3 + 1) % n3;
          m3 = (i3 + n3 - 1) % n3;
        }
        const std::int64_t node = g.index(i1, i2, i3);
        const std::int64_t plus = g.index(p1, p2, p3);
        const std::int64_t minus = g.index(m1, m2, m3);
        for (int k = 0; k < c; ++k) out.at(node, k) = (f.at(plus, k) - f.at(minus, k)) * inv2h;
      }
  return out;
}

PeriodicField grad(const PeriodicField& f) {
  const int c = f.components();
  PeriodicField out(f.grid(), 3 * c);
  for (int axis = 0; axis < 3; ++axis) {
    const PeriodicField d = deriv(f, axis);
    const std::int64_t nn = f.grid().num_nodes();
    for (std::int64_t node = 0; node < nn; ++node)
      for (int k = 0; k < c; ++k) out.at(node, 3 * k + axis) = d.at(node, k);
  }
  return out;
}

PeriodicField div(const PeriodicField& f) {
  if (f.components() % 3 != 0) throw std::invalid_argument("div expects 3c components");
  const int c = f.components() / 3;
  PeriodicField out(f.grid(), c);
  for (int axis = 0; axis < 3; ++axis) {
    const PeriodicField d = deriv(f, axis);
    const std::int64_t nn = f.grid().num_nodes();
    for (std::int64_t node = 0; node < nn; ++node)
      for (int k = 0; k < c; ++k) out.at(node, k) += d.at(node, 3 * k + axis);
  }
  return out;
}

double curl_constraint_residual(const PeriodicField& f) {
  if (f.components() != 9) throw std::invalid_argument("curl residual expects 9 components");
  std::array<PeriodicField, 3> d;
  for (int axis = 0; axis < 3; ++axis) d[static_cast<std::size_t>(axis)] = deriv(f, axis);
  double worst = 0.0;
  const std::int64_t nn = f.grid().num_nodes();
  for (std::int64_t node = 0; node < nn; ++node)
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          const double r = d[static_cast<std::size_t>(a)].at(node, 3 * i + b) -
                           d[static_cast<std::size_t>(b)].at(node, 3 * i + a);
          worst = std::max(worst, std::abs(r));
        }
  return worst;
}

namespace {

// C-infinity bump exp(-1/(1-s^2)) on |s|<1
double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s2));
}

// normalized discrete kernel along one axis
std::vector<double> axis_kernel(int n, double epsilon) {
  const double h = 1.0 / n;
  const int half = static_cast<int>(std::floor(epsilon / h));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  double total = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double v = bump(k * h / epsilon);
    w[static_cast<std::size_t>(k + half)] = v;
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

PeriodicField convolve_axis(const PeriodicField& f, int axis, const std::vector<double>& w) {
  const Grid& g = f.grid();
  const int c = f.components();
  const int n = g.dims[axis];
  const int half = (static_cast<int>(w.size()) - 1) / 2;
  PeriodicField out(g, c);
  for (int i1 = 0; i1 < g.dims[0]; ++i1)
    for (int i2 = 0; i2 < g.dims[1]; ++i2)
      for (int i3 = 0; i3 < g.dims[2]; ++i3) {
        const std::int64_t node = g.index(i1, i2, i3);
        for (int k = -half; k <= half; ++k) {
          int j1 = i1, j2 = i2, j3 = i3;
          if (axis == 0)
            j1 = ((i1 + k) % n + n) % n;
          else if (axis == 1)
            j2 = ((i2 + k) % n + n) % n;
          else
            j3 = ((i3 + k) % n + n) % n;
          const double wk = w[static_cast<std::size_t>(k + half)];
          const std::int64_t src = g.index(j1, j2, j3);
          for (int comp = 0; comp < c; ++comp) out.at(node, comp) += wk * f.at(src, comp);
        }
      }
  return out;
}

}  // namespace

PeriodicField mollify(const PeriodicField& f, double epsilon) {
  const Grid& g = f.grid();
  PeriodicField out = f;
  for (int axis = 0; axis < 3; ++axis) {
    if (g.dims[axis] == 1) continue;
    if (epsilon < 2.0 * g.h(axis)) throw std::invalid_argument("mollify: epsilon under-resolved (need >= 2h)");
    out = convolve_axis(out, axis, axis_kernel(g.dims[axis], epsilon));
  }
  return out;
}

double inner(const PeriodicField& u, const PeriodicField& w) {
  if (u.grid() != w.grid() || u.components() != w.components())
    throw std::invalid_argument("inner: shape mismatch");
  double s = 0.0;
  const std::size_t n = u.values().size();
  for (std::size_t k = 0; k < n; ++k) s += u.values()[k] * w.values()[k];
  return s * u.grid().cell_volume();
}

double pair_space(const PeriodicField& f, const std::vector<double>& weights,
                  const TestFunction& phi, double t) {
  if (static_cast<int>(weights.size()) != f.components())
    throw std::invalid_argument("pair_space: weight/component mismatch");
  const Grid& g = f.grid();
  double s = 0.0;
  for (int i1 = 0; i1 < g.dims[0]; ++i1)
    for (int i2 = 0; i2 < g.dims[1]; ++i2)
      for (int i3 = 0; i3 < g.dims[2]; ++i3) {
        const std::int64_t node = g.index(i1, i2, i3);
        double fv = 0.0;
        for (int c = 0; c < f.components(); ++c)
          fv += weights[static_cast<std::size_t>(c)] * f.at(node, c);
        s += fv * phi.value(g.coords(i1, i2, i3), t);
      }
  return s * g.cell_volume();
}

double pair(const std::vector<PeriodicField>& snapshots, const std::vector<double>& times,
            const std::vector<double>& weights, const TestFunction& phi) {
  if (snapshots.empty() || snapshots.size() != times.size())
    throw std::invalid_argument("pair: empty or inconsistent snapshot set");
  if (snapshots.size() == 1) return pair_space(snapshots[0], weights, phi, times[0]);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < snapshots.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    s += 0.5 * dt *
         (pair_space(snapshots[k], weights, phi, times[k]) +
          pair_space(snapshots[k + 1], weights, phi, times[k + 1]));
  }
  return s;
}

double lp_norm(const PeriodicField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const std::int64_t nn = f.grid().num_nodes();
  const int c = f.components();
  if (std::isinf(p)) {
    double worst = 0.0;
    for (std::int64_t node = 0; node < nn; ++node) {
      double sq = 0.0;
      for (int k = 0; k < c; ++k) sq += f.at(node, k) * f.at(node, k);
      worst = std::max(worst, sq);
    }
    return std::sqrt(worst);
  }
  double s = 0.0;
  for (std::int64_t node = 0; node < nn; ++node) {
    double sq = 0.0;
    for (int k = 0; k < c; ++k) sq += f.at(node, k) * f.at(node, k);
    s += std::pow(std::sqrt(sq), p);
  }
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double max_abs(const PeriodicField& f) {
  double worst = 0.0;
  for (double v : f.values()) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace polytherm
