#pragma once

// Fixed-size 3-vectors and 3x3 matrices. Row-major storage.

#include <array>
#include <cmath>
#include <cstddef>

namespace equiorbit {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) {
  a[0] += b[0]; a[1] += b[1]; a[2] += b[2];
  return a;
}
inline Vec3& operator-=(Vec3& a, const Vec3& b) {
  a[0] -= b[0]; a[1] -= b[1]; a[2] -= b[2];
  return a;
}
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

struct Mat3 {
  std::array<double, 9> a{};

  static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  static constexpr Mat3 zero() { return Mat3{}; }
  static Mat3 diag(double x, double y, double z) { return Mat3{{x, 0, 0, 0, y, 0, 0, 0, z}}; }

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(3 * r + c)]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(3 * r + c)]; }

  Mat3 transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(c, r) = (*this)(r, c);
    return t;
  }
  double trace() const { return a[0] + a[4] + a[8]; }
  double det() const {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }
};

inline Mat3 operator*(const Mat3& x, const Mat3& y) {
  Mat3 z;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      z(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c) + x(r, 2) * y(2, c);
  return z;
}
inline Vec3 operator*(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
          m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
          m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}
inline Mat3 operator*(double s, const Mat3& m) {
  Mat3 z = m;
  for (double& e : z.a) e *= s;
  return z;
}
inline Mat3 operator-(const Mat3& m) { return -1.0 * m; }
inline Mat3 operator+(const Mat3& x, const Mat3& y) {
  Mat3 z;
  for (std::size_t i = 0; i < 9; ++i) z.a[i] = x.a[i] + y.a[i];
  return z;
}
inline Mat3 operator-(const Mat3& x, const Mat3& y) {
  Mat3 z;
  for (std::size_t i = 0; i < 9; ++i) z.a[i] = x.a[i] - y.a[i];
  return z;
}

// Largest entrywise difference.
inline double max_abs_diff(const Mat3& x, const Mat3& y) {
  double d = 0;
  for (std::size_t i = 0; i < 9; ++i) d = std::fmax(d, std::fabs(x.a[i] - y.a[i]));
  return d;
}

// Antisymmetric matrix W with W v = w x v.
inline Mat3 cross_matrix(const Vec3& w) {
  return Mat3{{0, -w[2], w[1], w[2], 0, -w[0], -w[1], w[0], 0}};
}

// Rotation by angle about a unit axis (Rodrigues).
inline Mat3 axis_rotation(const Vec3& axis, double angle) {
  const Vec3 u = normalized(axis);
  const double c = std::cos(angle), s = std::sin(angle), C = 1 - c;
  return Mat3{{c + u[0] * u[0] * C, u[0] * u[1] * C - u[2] * s, u[0] * u[2] * C + u[1] * s,
               u[1] * u[0] * C + u[2] * s, c + u[1] * u[1] * C, u[1] * u[2] * C - u[0] * s,
               u[2] * u[0] * C - u[1] * s, u[2] * u[1] * C + u[0] * s, c + u[2] * u[2] * C}};
}

// Any unit vector orthogonal to v.
inline Vec3 any_orthogonal(const Vec3& v) {
  const Vec3 e = std::fabs(v[0]) < 0.6 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  return normalized(cross(v, e));
}

}  // namespace equiorbit
