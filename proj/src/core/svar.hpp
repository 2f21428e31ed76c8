#pragma once

// The local-variation integral
//   S(s, d) = int_0^inf |t^{2/(2+a)} s + d|^{-a} - |t^{2/(2+a)} s|^{-a} dt
// and its averages over rotating circles and spheres.

#include <vector>

#include "linalg.hpp"
#include "symgroup.hpp"

namespace equiorbit {

// Returns +infinity when d is a negative multiple of s and alpha >= 1.
double s_integral(const Vec3& s, const Vec3& delta, double alpha = 1.0);

enum class VariationOutcome { Decreases, Inconclusive };

// Decreases iff every pairwise S <= 1e-12 and at least one is <= -1e-9.
VariationOutcome standard_variation_test(const std::vector<Vec3>& sbar, const std::vector<Vec3>& delta,
                                         double alpha = 1.0);

// delta generated from the point c(theta) of the circle at body i by the
// group (delta_{sigma(g) i} = rho(g) c), zero elsewhere; averaged over theta of
// sum_{j != i} S(sbar_i - sbar_j, delta_i - delta_j).
double circle_average(const std::vector<Vec3>& sbar, int i, const Vec3& axis, double radius,
                      const SymmetryGroup& g_star, double alpha = 1.0);

struct SphereTerm {
  int body = 0;       // partner j
  double c_g = 0.0;   // largest singular value of 1 - rho(g) (0 for bodies outside the orbit of i)
  double average = 0.0;
};

struct SphereAverage {
  double value = 0.0;
  std::vector<SphereTerm> terms;
};

// Same construction with delta_i ranging over the unit sphere. For a rotation
// by beta, (1 - rho) u = c_g sin(theta) w(phi) with c_g = 2 sin(beta / 2) and w
// a unit vector orthogonal to the axis, so by homogeneity of S in delta the
// polar integral is a Beta function and only a circle average remains.
// Both averages split their angular integrals where the variation vanishes or
// points along -s (the integrand is singular there) and use tanh-sinh on each
// piece.
SphereAverage sphere_average(const std::vector<Vec3>& sbar, int i, const SymmetryGroup& g_star,
                             double alpha = 1.0);

}  // namespace equiorbit
