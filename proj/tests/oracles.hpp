#pragma once

// Reference computations used by the unit and acceptance tests. They are
// written without calling into the code under test wherever practical.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "action.hpp"
#include "krh.hpp"
#include "pointgroups.hpp"
#include "symgroup.hpp"

namespace oracle {

using namespace equiorbit;

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> x, w;
  explicit GaussRule(int n) {
    for (int i = 1; i <= n; ++i) {
      double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        const double dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      x.push_back(z);
      w.push_back(2 / ((1 - z * z) * dp * dp));
    }
  }
  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double c = (a + b) / 2, h = (b - a) / 2;
    double acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(c + h * x[i]);
    return acc * h;
  }
};

// S(s, d) = int_0^inf |t^{2/(2+a)} s + d|^{-a} - |t^{2/(2+a)} s|^{-a} dt,
// integrated directly in t over geometrically graded panels.
inline double brute_s_integral(const Vec3& s, const Vec3& d, double a) {
  static const GaussRule gl(24);
  const double ns = norm(s), nd = norm(d);
  if (nd == 0) return 0;
  const double e = 2 / (2 + a);
  auto f = [&](double t) {
    const double u = std::pow(t, e);
    const double base = std::pow(u * ns, -a);
    // |us + d|^2 / |us|^2 = 1 + q
    const double q = (2 * u * dot(s, d) + nd * nd) / (u * u * ns * ns);
    if (q < -0.5) return std::pow(norm(u * s + d), -a) - base;  // near -d: no cancellation to protect
    return base * std::expm1(-(a / 2) * std::log1p(q));
  };
  // natural time scale: |u s| = |d|
  const double t0 = std::pow(nd / ns, 1 / e);
  std::vector<double> cuts;
  const double tiny = t0 * std::ldexp(1.0, -110);
  for (int j = 110; j >= 1; --j) cuts.push_back(t0 * std::ldexp(1.0, -j));
  cuts.push_back(t0);
  const double uc = -dot(s, d) / (ns * ns);
  if (uc > 0) {
    // closest approach of u s to -d: grade towards it from both sides
    const double tc = std::pow(uc, 1 / e);
    for (int j = 1; j <= 60; ++j) {
      cuts.push_back(tc * (1 - std::ldexp(1.0, -j)));
      cuts.push_back(tc * (1 + std::ldexp(1.0, -j)));
    }
    cuts.push_back(tc);
    cuts.push_back(2 * tc);
  }
  double top = *std::max_element(cuts.begin(), cuts.end());
  for (int j = 1; j <= 120; ++j) cuts.push_back(top * std::ldexp(1.0, j));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // [0, tiny]: the regular part is ~|d|^{-a}, the singular part exact
  const double qexp = a * e;
  double total = tiny * std::pow(nd, -a) - std::pow(ns, -a) * std::pow(tiny, 1 - qexp) / (1 - qexp);
  double prev = tiny;
  for (double c : cuts) {
    if (c <= prev) continue;
    total += gl.integrate(f, prev, c);
    prev = c;
  }
  // leading asymptotic tail: f ~ -a (s.d) |s|^{-a-2} t^{-p}
  const double p = 2 * (a + 1) / (2 + a);
  total += -a * dot(s, d) * std::pow(ns, -a - 2) * std::pow(prev, 1 - p) / (p - 1);
  return total;
}

// Breakpoints on [a, b] graded geometrically towards the chosen ends.
inline std::vector<double> graded_cuts(double a, double b, bool left, bool right, int levels) {
  std::vector<double> c{a, b};
  const double mid = (a + b) / 2, h = (b - a) / 2;
  c.push_back(mid);
  for (int j = 1; j <= levels; ++j) {
    if (left) c.push_back(a + h * std::ldexp(1.0, -j));
    if (right) c.push_back(b - h * std::ldexp(1.0, -j));
  }
  std::sort(c.begin(), c.end());
  return c;
}

template <class F>
double panel_integral(F&& f, const std::vector<double>& cuts, const GaussRule& rule) {
  double acc = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += rule.integrate(f, cuts[i], cuts[i + 1]);
  return acc;
}

// Integral of f over [c - L, c + L] after c -/+ L x^m on [0, 1]; m > 1 flattens
// an algebraic singularity or cusp at c.
template <class F>
double substituted_integral(F&& f, double c, double L, int m, int panels, const GaussRule& rule) {
  auto g = [&](double x) {
    const double h = L * std::pow(x, m);
    return m * std::pow(x, m - 1) * L * (f(c - h) + f(c + h));
  };
  std::vector<double> cuts;
  for (int i = 0; i <= panels; ++i) cuts.push_back(static_cast<double>(i) / panels);
  return panel_integral(g, cuts, rule);
}

// Average of S(s, u) over unit vectors u, from the closed form
// avg_u |x + u|^{-a} = ((R + 1)^{2-a} - |R - 1|^{2-a}) / (2 R (2 - a)), R = |x|,
// and a one-dimensional integral over the time variable of S.
inline double sphere_shift_average(const Vec3& s, double a) {
  const GaussRule gl(20);
  const double ns = norm(s), e = 2 / (2 + a);
  // shell average alone, bounded near t = 0
  auto shell = [&](double t) {
    const double R = ns * std::pow(t, e);
    if (R < 1e-4) return 1 + a * (a - 1) / 6 * R * R;
    return (std::pow(R + 1, 2 - a) - std::pow(std::fabs(R - 1), 2 - a)) / (2 * R * (2 - a));
  };
  auto f = [&](double t) {
    const double R = ns * std::pow(t, e);
    // the difference of powers cancels for large R; use its expansion
    if (R > 1e3) return std::pow(R, -a) * a * (a - 1) * (1 / (6 * R * R) + (a + 1) * (a + 2) / (120 * std::pow(R, 4)));
    return shell(t) - std::pow(R, -a);
  };
  const double tk = std::pow(ns, -1 / e);  // R = 1, where the average has a kink
  // on [0, tk] the subtracted power is integrated exactly
  double acc = panel_integral(shell, graded_cuts(0, tk, false, true, 60), gl) -
               std::pow(ns, -a) * std::pow(tk, 1 - a * e) / (1 - a * e);
  acc += panel_integral(f, graded_cuts(tk, 2 * tk, true, false, 60), gl);
  double lo = 2 * tk;
  for (int j = 0; j < 80; ++j, lo *= 2) acc += gl.integrate(f, lo, 2 * lo);
  // f ~ a (a - 1) / 6 R^{-a-2} = a (a - 1) / 6 |s|^{-a-2} t^{-2}
  return acc + a * (a - 1) / 6 * std::pow(ns, -a - 2) / lo;
}

// Central differences of the action in the to_vector coordinates.
inline std::vector<double> fd_gradient(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                                       const FrameSpec& frame, double h) {
  std::vector<double> v = loop.to_vector(), g(v.size());
  FourierLoop work = loop;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double keep = v[i];
    v[i] = keep + h;
    work.assign(v);
    const double up = eval_action(work, masses, alpha, frame).value;
    v[i] = keep - h;
    work.assign(v);
    const double down = eval_action(work, masses, alpha, frame).value;
    v[i] = keep;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// K acting on |K| bodies by left multiplication, trivially on time.
inline SymmetryGroup free_action_group(const MatrixGroup& K) {
  const auto& el = K.elements();
  const int n = static_cast<int>(el.size());
  std::vector<SymmetryElement> gens;
  for (const Mat3& m : small_generating_set(K)) {
    SymmetryElement g;
    g.rho = m;
    g.sigma.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.sigma[static_cast<std::size_t>(i)] = static_cast<int>(*K.index_of(m * el[static_cast<std::size_t>(i)]));
    gens.push_back(g);
  }
  if (gens.empty()) gens.push_back(SymmetryElement::identity(n));
  return make_group(gens, n, std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

// Half-period anti-symmetric groups x_i(t + T/2) = -x_i(t) with core K acting
// freely (k = 1), or the trivial core repeated over k bodies.
inline SymmetryGroup antisymmetric_group(const MatrixGroup& K, std::int64_t k = 1) {
  KrhData krh;
  krh.K = K;
  krh.r = -Mat3::identity();
  HatKrhData hat;
  hat.k = k;
  hat.rhat = -Mat3::identity();
  return group_from_data(krh, std::span(&hat, 1));
}

inline SymmetryGroup three_body_antisymmetric() { return antisymmetric_group(MatrixGroup{}, 3); }
inline SymmetryGroup dihedral_four_body() { return antisymmetric_group(build_named({Family::D, 2})); }
inline SymmetryGroup tetrahedral_twelve_body() { return antisymmetric_group(build_named({Family::T, 0})); }
inline SymmetryGroup icosahedral_sixty_body() { return antisymmetric_group(build_named({Family::Y, 0})); }

// Two bodies, x(-t) = -x(t) for each: no rotation axis, trivial core.
inline SymmetryGroup odd_pair() {
  SymmetryElement g;
  g.tau = TimeIsometry::reflection(Fraction(0, 1));
  g.rho = -Mat3::identity();
  g.sigma = identity_permutation(2);
  return make_group(std::span(&g, 1), 2, {1.0, 1.0});
}

// x_{i+1}(t + T/n) = zeta_n x_i(t): a rotating choreography with axis z.
inline SymmetryGroup rotating_choreography(int n) {
  SymmetryElement g;
  g.tau = TimeIsometry::rotation(Fraction(1, n));
  g.rho = axis_rotation({0, 0, 1}, 2 * std::numbers::pi / n);
  g.sigma.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.sigma[static_cast<std::size_t>(i)] = (i + 1) % n;
  return make_group(std::span(&g, 1), n, std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

// rotating_choreography plus x(t + 1/2) = -x(t); the anti-symmetry rules out
// escaping static configurations, so the action is coercive
inline SymmetryGroup rotating_antisymmetric_choreography(int n) {
  SymmetryElement g[2];
  g[0].tau = TimeIsometry::rotation(Fraction(1, n));
  g[0].rho = axis_rotation({0, 0, 1}, 2 * std::numbers::pi / n);
  g[0].sigma.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[0].sigma[static_cast<std::size_t>(i)] = (i + 1) % n;
  g[1].tau = TimeIsometry::rotation(Fraction(1, 2));
  g[1].rho = -Mat3::identity();
  g[1].sigma.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[1].sigma[static_cast<std::size_t>(i)] = i;
  return make_group(std::span(g, 2), n, std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

inline FourierLoop random_loop(int n, int modes, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, 1.0);
  FourierLoop l = FourierLoop::zero(n, modes, 1.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= modes; ++k)
      for (int c = 0; c < 3; ++c) {
        const double re = nd(rng) * scale / (1 + k);
        const double im = k == 0 ? 0.0 : nd(rng) * scale / (1 + k);
        l.coeffs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] = {re, im};
      }
  return l;
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const Vec3 ax = normalized(Vec3{nd(rng), nd(rng), nd(rng)});
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  return axis_rotation(ax, ang(rng));
}

inline Vec3 random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  return {nd(rng), nd(rng), nd(rng)};
}

// Expected rows of the three catalog tables, transcribed by hand.
struct CatalogRow {
  Label label;
  int order;
  std::vector<std::string> generators;
  std::string normalizer;
  std::vector<std::string> normalizer_generators;
  int normalizer_order;  // 0 for continuous normalizers
};

inline std::vector<CatalogRow> catalog_rows(int pmax) {
  std::vector<CatalogRow> rows;
  auto z = [](int p) { return "zeta_" + std::to_string(p); };
  auto s = [](int p) { return std::to_string(p); };
  for (int p = 2; p <= pmax; ++p) rows.push_back({{Family::C, p}, p, {z(p)}, "O(2)", {"zeta_*", "kappa"}, 0});
  rows.push_back({{Family::D, 2}, 4, {z(2), "kappa"}, "O", {"zeta_4", "pi_3"}, 24});
  for (int p = 3; p <= pmax; ++p)
    rows.push_back({{Family::D, p}, 2 * p, {z(p), "kappa"}, "D" + s(2 * p), {z(2 * p)}, 4 * p});
  rows.push_back({{Family::T, 0}, 12, {"zeta_2", "pi_3"}, "O", {"zeta_4"}, 24});
  rows.push_back({{Family::O, 0}, 24, {"zeta_4", "pi_3"}, "O", {}, 24});
  rows.push_back({{Family::Y, 0}, 60, {"pi_3", "pi_3'"}, "Y", {}, 60});
  rows.push_back({{Family::I, 0}, 2, {"-1"}, "O(3)", {}, 0});
  for (int p = 2; p <= pmax; ++p)
    rows.push_back({{Family::IxC, p}, 2 * p, {"-1", z(p)}, "IxO(2)", {"zeta_*", "kappa"}, 0});
  rows.push_back({{Family::IxD, 2}, 8, {"-1", z(2), "kappa"}, "IxO", {"zeta_4", "pi_3"}, 48});
  for (int p = 3; p <= pmax; ++p)
    rows.push_back({{Family::IxD, p}, 4 * p, {"-1", z(p), "kappa"}, "IxD" + s(2 * p), {z(2 * p)}, 8 * p});
  rows.push_back({{Family::IxT, 0}, 24, {"-1", "zeta_2", "pi_3"}, "IxO", {"zeta_4"}, 48});
  rows.push_back({{Family::IxO, 0}, 48, {"-1", "zeta_4", "pi_3"}, "IxO", {}, 48});
  rows.push_back({{Family::IxY, 0}, 120, {"-1", "pi_3", "pi_3'"}, "IxY", {}, 120});
  for (int p = 1; p <= pmax; ++p)
    rows.push_back({{Family::C2pCp, p}, 2 * p, {"-" + z(2 * p)}, "IxO(2)", {"zeta_*", "-1"}, 0});
  for (int p = 2; p <= pmax; ++p)
    rows.push_back({{Family::DpCp, p}, 2 * p, {z(p), "-kappa"}, "IxD" + s(2 * p), {"-1"}, 8 * p});
  for (int p = 1; p <= pmax; ++p)
    rows.push_back({{Family::D2pDp, p}, 4 * p, {z(p), "kappa", "-" + z(2 * p)}, "IxD" + s(2 * p), {"-1"}, 8 * p});
  rows.push_back({{Family::OT, 0}, 24, {"zeta_2", "pi_3", "-zeta_4"}, "IxO", {"-1"}, 48});
  return rows;
}

}  // namespace oracle
