#pragma once

#include <complex>
#include <vector>

#include "linalg.hpp"

namespace equiorbit {

using Complex = std::complex<double>;
using CVec3 = std::array<Complex, 3>;

// Truncated Fourier loop x_i(t) = sum_{k=-N..N} c_{i,k} exp(2 pi i k t / T).
// Only k = 0..N is stored; c_{i,-k} = conj(c_{i,k}) and c_{i,0} is real.
struct FourierLoop {
  int n = 0;
  int modes = 0;
  double period = 1.0;
  std::vector<std::vector<CVec3>> coeffs;  // [body][k]

  static FourierLoop zero(int n, int modes, double period);

  Vec3 position(int body, double t) const;
  Vec3 velocity(int body, double t) const;

  // Real parameters per body: Re c_0 (3), then Re c_k (3), Im c_k (3) for k = 1..N.
  std::size_t dimension() const { return static_cast<std::size_t>(n) * 3 * (2 * modes + 1); }
  std::vector<double> to_vector() const;
  void assign(const std::vector<double>& v);

  // L2 norm over one period divided by T: sum_i |c_0|^2 + 2 sum_k |c_k|^2, square-rooted.
  double norm() const;
  // Largest coefficient difference.
  double distance(const FourierLoop& other) const;
  FourierLoop with_modes(int new_modes) const;
};

}  // namespace equiorbit
