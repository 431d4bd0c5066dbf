#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace polytherm {

using Vec3 = std::array<double, 3>;

/// Dense 3x3 real matrix, row-major storage.
struct Matrix3 {
  std::array<double, 9> a{};

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(3 * i + j)]; }

  static Matrix3 identity() {
    Matrix3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }
  static Matrix3 zero() { return Matrix3{}; }
  static Matrix3 diag(double d0, double d1, double d2) {
    Matrix3 m;
    m(0, 0) = d0;
    m(1, 1) = d1;
    m(2, 2) = d2;
    return m;
  }

  Matrix3 transpose() const {
    Matrix3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
  }

  double frobenius_sq() const {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
  }
  double frobenius() const { return std::sqrt(frobenius_sq()); }
};

inline Matrix3 operator+(const Matrix3& x, const Matrix3& y) {
  Matrix3 r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = x.a[k] + y.a[k];
  return r;
}
inline Matrix3 operator-(const Matrix3& x, const Matrix3& y) {
  Matrix3 r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = x.a[k] - y.a[k];
  return r;
}
inline Matrix3 operator*(double s, const Matrix3& x) {
  Matrix3 r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = s * x.a[k];
  return r;
}
inline Matrix3 matmul(const Matrix3& x, const Matrix3& y) {
  Matrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
      r(i, j) = s;
    }
  return r;
}
/// Frobenius inner product x : y.
inline double ddot(const Matrix3& x, const Matrix3& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < 9; ++k) s += x.a[k] * y.a[k];
  return s;
}

inline Vec3 operator+(const Vec3& x, const Vec3& y) {
  return {x[0] + y[0], x[1] + y[1], x[2] + y[2]};
}
inline Vec3 operator-(const Vec3& x, const Vec3& y) {
  return {x[0] - y[0], x[1] - y[1], x[2] - y[2]};
}
inline Vec3 operator*(double s, const Vec3& x) { return {s * x[0], s * x[1], s * x[2]}; }

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
inline double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

/// Levi-Civita symbol for indices in {0,1,2}.
inline constexpr double levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  // even permutations of (0,1,2)
  if ((i == 0 && j == 1 && k == 2) || (i == 1 && j == 2 && k == 0) || (i == 2 && j == 0 && k == 1))
    return 1.0;
  return -1.0;
}

}  // namespace polytherm
