#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polytherm/matrix3.hpp"
#include "polytherm/testfn.hpp"

namespace polytherm {

/// Uniform periodic grid on the unit torus. An axis with a single node is
/// collapsed (derivatives along it vanish); this gives the 1-D scalar
/// reduction without a separate code path.
struct Grid {
  std::array<int, 3> dims{4, 4, 4};

  Grid() = default;
  explicit Grid(int n) : dims{n, n, n} { validate(); }
  Grid(int n1, int n2, int n3) : dims{n1, n2, n3} { validate(); }

  void validate() const {
    for (int d = 0; d < 3; ++d)
      if (dims[d] != 1 && dims[d] < 4) throw std::invalid_argument("grid axis needs >= 4 nodes");
  }

  double h(int axis) const { return 1.0 / dims[axis]; }
  /// Smallest spacing among non-collapsed axes.
  double h_min() const {
    double hm = 1.0;
    for (int d = 0; d < 3; ++d)
      if (dims[d] > 1 && h(d) < hm) hm = h(d);
    return hm;
  }
  std::int64_t num_nodes() const {
    return std::int64_t(dims[0]) * dims[1] * dims[2];
  }
  /// Cell volume of the unit torus quadrature.
  double cell_volume() const { return 1.0 / double(num_nodes()); }

  std::int64_t index(int i1, int i2, int i3) const {
    return (std::int64_t(i1) * dims[1] + i2) * dims[2] + i3;
  }
  Vec3 coords(int i1, int i2, int i3) const {
    return {i1 * h(0), i2 * h(1), i3 * h(2)};
  }

  bool operator==(const Grid&) const = default;
};

/// Multi-component field sampled on a periodic grid. Values are stored
/// node-major: values[node * components + c].
class PeriodicField {
 public:
  PeriodicField() = default;
  PeriodicField(const Grid& grid, int components, double fill = 0.0)
      : grid_(grid),
        components_(components),
        values_(static_cast<std::size_t>(grid.num_nodes()) * components, fill) {}

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double& at(std::int64_t node, int c) { return values_[static_cast<std::size_t>(node * components_ + c)]; }
  double at(std::int64_t node, int c) const { return values_[static_cast<std::size_t>(node * components_ + c)]; }
  double& at(int i1, int i2, int i3, int c) { return at(grid_.index(i1, i2, i3), c); }
  double at(int i1, int i2, int i3, int c) const { return at(grid_.index(i1, i2, i3), c); }

  /// Fill from a callback (x, component) -> value.
  template <typename Fn>
  void fill(Fn&& fn) {
    for (int i1 = 0; i1 < grid_.dims[0]; ++i1)
      for (int i2 = 0; i2 < grid_.dims[1]; ++i2)
        for (int i3 = 0; i3 < grid_.dims[2]; ++i3) {
          const Vec3 x = grid_.coords(i1, i2, i3);
          for (int c = 0; c < components_; ++c) at(i1, i2, i3, c) = fn(x, c);
        }
  }

  bool all_finite() const;

 private:
  Grid grid_;
  int components_ = 0;
  std::vector<double> values_;
};

/// Second-order centered gradient: c components -> 3c, output component
/// (j*3 + alpha) = d_alpha f_j. Collapsed axes contribute zero.
PeriodicField grad(const PeriodicField& f);

/// Discrete divergence, negative adjoint of grad: 3c components -> c.
PeriodicField div(const PeriodicField& f);

/// Centered derivative along one axis, all components.
PeriodicField deriv(const PeriodicField& f, int axis);

/// Max over i, alpha, beta of |d_alpha F_{i beta} - d_beta F_{i alpha}| for a
/// 9-component field F (component i*3 + beta).
double curl_constraint_residual(const PeriodicField& f);

/// Convolution with the periodized product bump kernel; mass preserving.
/// Requires epsilon >= 2h on every non-collapsed axis.
PeriodicField mollify(const PeriodicField& f, double epsilon);

/// Grid inner product <u, w> = (1/N) sum_nodes sum_c u w.
double inner(const PeriodicField& u, const PeriodicField& w);

/// Spatial pairing  integral f_c(x) * weights_c * phi(x, t) dx  by grid quadrature.
double pair_space(const PeriodicField& f, const std::vector<double>& weights,
                  const TestFunction& phi, double t);

/// Space-time pairing over stored snapshots, trapezoidal in time.
double pair(const std::vector<PeriodicField>& snapshots, const std::vector<double>& times,
            const std::vector<double>& weights, const TestFunction& phi);

/// L^p norm by grid quadrature of the pointwise Euclidean component norm;
/// p = infinity() gives the max norm.
double lp_norm(const PeriodicField& f, double p);

double max_abs(const PeriodicField& f);

}  // namespace polytherm
