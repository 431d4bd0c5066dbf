#pragma once

#include <array>

#include "polytherm/grid.hpp"
#include "polytherm/matrix3.hpp"

namespace polytherm {

inline constexpr int kMinorsDim = 19;

/// The null-Lagrangian vector xi = (F, cof F, det F). Flattening order is
/// fixed project-wide: components 0..8 are F row-major, 9..17 are the
/// cofactor block row-major, 18 is the determinant.
struct MinorsVector {
  Matrix3 f;
  Matrix3 z;
  double w = 0.0;

  double component(int b) const {
    if (b < 9) return f.a[static_cast<std::size_t>(b)];
    if (b < 18) return z.a[static_cast<std::size_t>(b - 9)];
    return w;
  }
  void set_component(int b, double value) {
    if (b < 9)
      f.a[static_cast<std::size_t>(b)] = value;
    else if (b < 18)
      z.a[static_cast<std::size_t>(b - 9)] = value;
    else
      w = value;
  }
  std::array<double, kMinorsDim> flat() const {
    std::array<double, kMinorsDim> out;
    for (int b = 0; b < kMinorsDim; ++b) out[static_cast<std::size_t>(b)] = component(b);
    return out;
  }
  double norm_sq() const { return f.frobenius_sq() + z.frobenius_sq() + w * w; }
};

inline MinorsVector operator-(const MinorsVector& x, const MinorsVector& y) {
  return {x.f - y.f, x.z - y.z, x.w - y.w};
}
inline MinorsVector operator+(const MinorsVector& x, const MinorsVector& y) {
  return {x.f + y.f, x.z + y.z, x.w + y.w};
}
inline MinorsVector operator*(double s, const MinorsVector& x) {
  return {s * x.f, s * x.z, s * x.w};
}
inline double dot(const MinorsVector& x, const MinorsVector& y) {
  return ddot(x.f, y.f) + ddot(x.z, y.z) + x.w * y.w;
}

/// Jacobian dPhi^B/dF_{i alpha}: one 3x3 block per minors component B.
struct MinorsJacobian {
  std::array<Matrix3, kMinorsDim> blocks;

  /// Contract a 19-vector against the Jacobian: out_{i alpha} = g_B dPhi^B/dF_{i alpha}.
  Matrix3 contract_left(const MinorsVector& g) const {
    Matrix3 out;
    for (int b = 0; b < kMinorsDim; ++b) {
      const double gb = g.component(b);
      if (gb == 0.0) continue;
      for (std::size_t k = 0; k < 9; ++k) out.a[k] += gb * blocks[static_cast<std::size_t>(b)].a[k];
    }
    return out;
  }
  /// Directional derivative: out_B = dPhi^B/dF_{i alpha} delta_{i alpha}.
  MinorsVector contract_right(const Matrix3& delta) const {
    MinorsVector out;
    for (int b = 0; b < kMinorsDim; ++b)
      out.set_component(b, ddot(blocks[static_cast<std::size_t>(b)], delta));
    return out;
  }
};

/// (cof F)_{i alpha} = 1/2 eps_{ijk} eps_{alpha beta gamma} F_{j beta} F_{k gamma}.
Matrix3 cofactor(const Matrix3& f);

/// det F = 1/6 eps eps eps F F F = 1/3 cof(F) : F.
double determinant(const Matrix3& f);

/// Phi(F) = (F, cof F, det F).
MinorsVector minors_vector(const Matrix3& f);

/// Exact analytic Jacobian dPhi/dF. The F-block is the identity pairing and
/// the determinant row is cof F (Jacobi's formula).
MinorsJacobian minors_jacobian(const Matrix3& f);

/// Discrete Piola identity residual for a motion y = x + u given by its
/// periodic displacement u (3 components): for each B, the Euclidean norm
/// over i of sum_alpha d_alpha (dPhi^B/dF_{i alpha}(I + grad_h u)) per node.
PeriodicField piola_residual(const PeriodicField& u);

}  // namespace polytherm
