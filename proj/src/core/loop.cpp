#include "loop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace equiorbit {

FourierLoop FourierLoop::zero(int n, int modes, double period) {
  if (n < 0 || modes < 0) fail(ErrorCode::kInvalidParameter, "loop size must be non-negative");
  if (!(period > 0)) fail(ErrorCode::kInvalidPeriod, "period must be positive");
  FourierLoop l;
  l.n = n;
  l.modes = modes;
  l.period = period;
  l.coeffs.assign(static_cast<std::size_t>(n), std::vector<CVec3>(static_cast<std::size_t>(modes) + 1, CVec3{}));
  return l;
}

Vec3 FourierLoop::position(int body, double t) const {
  const auto& c = coeffs[static_cast<std::size_t>(body)];
  Vec3 x{c[0][0].real(), c[0][1].real(), c[0][2].real()};
  const double w = 2 * std::numbers::pi * t / period;
  for (int k = 1; k <= modes; ++k) {
    const Complex e(std::cos(k * w), std::sin(k * w));
    for (std::size_t a = 0; a < 3; ++a) x[a] += 2 * (c[static_cast<std::size_t>(k)][a] * e).real();
  }
  return x;
}

Vec3 FourierLoop::velocity(int body, double t) const {
  const auto& c = coeffs[static_cast<std::size_t>(body)];
  Vec3 v{};
  const double w0 = 2 * std::numbers::pi / period;
  for (int k = 1; k <= modes; ++k) {
    const Complex e(std::cos(k * w0 * t), std::sin(k * w0 * t));
    const Complex ik(0.0, k * w0);
    for (std::size_t a = 0; a < 3; ++a) v[a] += 2 * (ik * c[static_cast<std::size_t>(k)][a] * e).real();
  }
  return v;
}

std::vector<double> FourierLoop::to_vector() const {
  std::vector<double> v;
  v.reserve(dimension());
  for (const auto& body : coeffs) {
    for (std::size_t a = 0; a < 3; ++a) v.push_back(body[0][a].real());
    for (std::size_t k = 1; k < body.size(); ++k) {
      for (std::size_t a = 0; a < 3; ++a) v.push_back(body[k][a].real());
      for (std::size_t a = 0; a < 3; ++a) v.push_back(body[k][a].imag());
    }
  }
  return v;
}

void FourierLoop::assign(const std::vector<double>& v) {
  if (v.size() != dimension()) fail(ErrorCode::kInvalidParameter, "coefficient vector has the wrong length");
  std::size_t p = 0;
  for (auto& body : coeffs) {
    for (std::size_t a = 0; a < 3; ++a) body[0][a] = Complex(v[p++], 0.0);
    for (std::size_t k = 1; k < body.size(); ++k) {
      for (std::size_t a = 0; a < 3; ++a) body[k][a] = Complex(v[p + a], v[p + 3 + a]);
      p += 6;
    }
  }
}

double FourierLoop::norm() const {
  double s = 0;
  for (const auto& body : coeffs)
    for (std::size_t k = 0; k < body.size(); ++k)
      for (const auto& z : body[k]) s += (k == 0 ? 1.0 : 2.0) * std::norm(z);
  return std::sqrt(s);
}

double FourierLoop::distance(const FourierLoop& other) const {
  if (other.n != n) fail(ErrorCode::kInvalidParameter, "loops have different body counts");
  double d = 0;
  const int kmax = std::max(modes, other.modes);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
    for (int k = 0; k <= kmax; ++k)
      for (std::size_t a = 0; a < 3; ++a) {
        const Complex x = k <= modes ? coeffs[i][static_cast<std::size_t>(k)][a] : Complex{};
        const Complex y = k <= other.modes ? other.coeffs[i][static_cast<std::size_t>(k)][a] : Complex{};
        d = std::max(d, std::abs(x - y));
      }
  return d;
}

FourierLoop FourierLoop::with_modes(int new_modes) const {
  FourierLoop l = zero(n, new_modes, period);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
    for (int k = 0; k <= std::min(modes, new_modes); ++k)
      l.coeffs[i][static_cast<std::size_t>(k)] = coeffs[i][static_cast<std::size_t>(k)];
  return l;
}

}  // namespace equiorbit
