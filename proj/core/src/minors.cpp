#include "polytherm/minors.hpp"

#include <stdexcept>

namespace polytherm {

Matrix3 cofactor(const Matrix3& f) {
  Matrix3 c;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) {
      // signed 2x2 minor complementary to (i, a)
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      const int b = (a + 1) % 3, g = (a + 2) % 3;
      c(i, a) = f(j, b) * f(k, g) - f(j, g) * f(k, b);
    }
  return c;
}

double determinant(const Matrix3& f) {
  return f(0, 0) * (f(1, 1) * f(2, 2) - f(1, 2) * f(2, 1)) -
         f(0, 1) * (f(1, 0) * f(2, 2) - f(1, 2) * f(2, 0)) +
         f(0, 2) * (f(1, 0) * f(2, 1) - f(1, 1) * f(2, 0));
}

MinorsVector minors_vector(const Matrix3& f) {
  return {f, cofactor(f), determinant(f)};
}

MinorsJacobian minors_jacobian(const Matrix3& f) {
  MinorsJacobian jac;
  // F-block: identity pairing delta^B_{i alpha}
  for (int b = 0; b < 9; ++b) jac.blocks[static_cast<std::size_t>(b)].a[static_cast<std::size_t>(b)] = 1.0;
  // cofactor block: d(cof F)_{i alpha}/dF_{mn} = eps_{imk} eps_{alpha n g} F_{k g}
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) {
      Matrix3& blk = jac.blocks[static_cast<std::size_t>(9 + 3 * i + a)];
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
          double s = 0.0;
          for (int k = 0; k < 3; ++k)
            for (int g = 0; g < 3; ++g) s += levi_civita(i, m, k) * levi_civita(a, n, g) * f(k, g);
          blk(m, n) = s;
        }
    }
  // determinant row: Jacobi's formula
  jac.blocks[18] = cofactor(f);
  return jac;
}

PeriodicField piola_residual(const PeriodicField& u) {
  if (u.components() != 3)
    throw std::invalid_argument("piola_residual expects a 3-component displacement");
  const Grid& g = u.grid();
  PeriodicField f_field = grad(u);  // component i*3 + alpha = d_alpha u_i
  for (std::int64_t node = 0; node < g.num_nodes(); ++node)
    for (int i = 0; i < 3; ++i) f_field.at(node, 4 * i) += 1.0;  // F = I + grad u

  // dPhi^B/dF_{i alpha} evaluated per node, stored as 19 x 9 components
  PeriodicField jac_field(g, kMinorsDim * 9);
  const std::int64_t nn = g.num_nodes();
  for (std::int64_t node = 0; node < nn; ++node) {
    Matrix3 f;
    for (int c = 0; c < 9; ++c) f.a[static_cast<std::size_t>(c)] = f_field.at(node, c);
    const MinorsJacobian jac = minors_jacobian(f);
    for (int b = 0; b < kMinorsDim; ++b)
      for (int c = 0; c < 9; ++c)
        jac_field.at(node, b * 9 + c) = jac.blocks[static_cast<std::size_t>(b)].a[static_cast<std::size_t>(c)];
  }

  PeriodicField res(g, kMinorsDim);
  // divergence over alpha for each (B, i) pair, then norm over i
  std::array<PeriodicField, 3> d;
  for (int axis = 0; axis < 3; ++axis) d[static_cast<std::size_t>(axis)] = deriv(jac_field, axis);
  for (std::int64_t node = 0; node < nn; ++node)
    for (int b = 0; b < kMinorsDim; ++b) {
      double sq = 0.0;
      for (int i = 0; i < 3; ++i) {
        double ri = 0.0;
        for (int alpha = 0; alpha < 3; ++alpha)
          ri += d[static_cast<std::size_t>(alpha)].at(node, b * 9 + 3 * i + alpha);
        sq += ri * ri;
      }
      res.at(node, b) = std::sqrt(sq);
    }
  return res;
}

}  // namespace polytherm
