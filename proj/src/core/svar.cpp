#include "svar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "error.hpp"

namespace equiorbit {

namespace {

constexpr double kQuadTol = 1e-11;

void check_alpha(double alpha) {
  if (!(alpha > 0)) fail(ErrorCode::kInvalidParameter, "alpha must be positive");
  if (alpha >= 2) fail(ErrorCode::kUnsupportedExponent, "S diverges for alpha >= 2");
}

void check_points(const std::vector<Vec3>& sbar) {
  for (std::size_t a = 0; a < sbar.size(); ++a)
    for (std::size_t b = a + 1; b < sbar.size(); ++b)
      if (norm(sbar[a] - sbar[b]) < 1e-12)
        fail(ErrorCode::kInvalidConfiguration,
             "bodies " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " coincide");
}

// Angles in [0, 2pi) where the variation d(theta) vanishes or nearly points
// along -s; the integrand of the averages is singular or sharply peaked there.
std::vector<double> singular_angles(const std::function<Vec3(double)>& d, const Vec3& s) {
  constexpr int kScan = 720;
  constexpr double kTwoPi = 2 * std::numbers::pi;
  const Vec3 sh = normalized(s);
  double dmax = 0;
  for (int q = 0; q < kScan; ++q) dmax = std::max(dmax, norm(d(kTwoPi * q / kScan)));
  if (dmax == 0) return {};
  auto badness = [&](double th) {
    const Vec3 v = d(th);
    const double nv = norm(v);
    if (nv <= 1e-300) return 0.0;
    return std::min(nv / dmax, norm((1 / nv) * v + sh));
  };
  // d(theta) = cos(theta) d(0) + sin(theta) d(pi/2) sweeps a plane with normal
  // nrm; g vanishes where d is zero or (anti)parallel to s
  const Vec3 nrm = cross(d(0.0), d(kTwoPi / 4));
  const bool plane = norm(nrm) > 1e-12 * dmax * dmax;
  auto g = [&](double th) { return dot(cross(d(th), sh), nrm); };
  auto gsign = [&](double th) { const double v = g(th); return v > 0 ? 1 : v < 0 ? -1 : 0; };
  std::vector<double> val(kScan);
  for (int q = 0; q < kScan; ++q) val[static_cast<std::size_t>(q)] = badness(kTwoPi * q / kScan);
  std::vector<double> out;
  const double h = kTwoPi / kScan;
  for (int q = 0; q < kScan; ++q) {
    const double v = val[static_cast<std::size_t>(q)];
    if (v > 1e-2 || v > val[static_cast<std::size_t>((q + kScan - 1) % kScan)] ||
        v > val[static_cast<std::size_t>((q + 1) % kScan)])
      continue;
    const double lo = kTwoPi * q / kScan - h, hi = kTwoPi * q / kScan + h;
    // badness has a corner at the singular angle, so minimizing it only finds
    // the angle to ~sqrt(eps); a sign change of g gives it to full precision
    double th = boost::math::tools::brent_find_minima(badness, lo, hi, 50).first;
    if (plane && gsign(lo) * gsign(hi) < 0) {
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
      th = (r.first + r.second) / 2;
    }
    th = std::fmod(th, kTwoPi);
    if (th < 0) th += kTwoPi;
    out.push_back(th);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return y - x < 1e-12; }), out.end());
  return out;
}

// Integral of a 2pi-periodic f over one period, split at the given angles.
template <class F>
double periodic_integral(F&& f, const std::vector<double>& cuts, double tol) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto safe = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;  // exact hits of an integrable singularity
  };
  constexpr double kTwoPi = 2 * std::numbers::pi;
  if (cuts.empty()) return ts.integrate(safe, 0.0, kTwoPi, tol);
  double total = 0;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    const double a = cuts[c];
    const double b = c + 1 < cuts.size() ? cuts[c + 1] : cuts[0] + kTwoPi;
    if (b - a > 1e-13) total += ts.integrate(safe, a, b, tol);
  }
  return total;
}

// One element of G_* moving body i to each body (nullptr if outside the orbit).
std::vector<const SymmetryElement*> movers(const SymmetryGroup& gs, int i) {
  std::vector<const SymmetryElement*> out(static_cast<std::size_t>(gs.n()), nullptr);
  for (const auto& e : gs.elements()) {
    const int j = e.sigma[static_cast<std::size_t>(i)];
    if (out[static_cast<std::size_t>(j)] == nullptr) out[static_cast<std::size_t>(j)] = &e;
  }
  return out;
}

}  // namespace

double s_integral(const Vec3& s, const Vec3& delta, double alpha) {
  check_alpha(alpha);
  const double ns = norm(s);
  if (!(ns > 0)) fail(ErrorCode::kInvalidParameter, "s must be non-zero");
  const double nd = norm(delta);
  if (nd == 0.0) return 0.0;
  const double sd = dot(s, delta);
  const bool antiparallel = norm(cross(s, delta)) == 0.0 && sd < 0;
  if (antiparallel && alpha >= 1) return std::numeric_limits<double>::infinity();

  // u = t^{2/(2+alpha)}, dt = (2+alpha)/2 u^{alpha/2} du
  const double jac = (2 + alpha) / 2;
  const double uc = std::max(0.0, -sd / (ns * ns));  // closest approach of u s to -delta
  // u s + delta = (u - uc) s + perp; perp from the cross product stays
  // accurate when delta is nearly antiparallel to s
  const Vec3 perp = uc > 0 ? (1 / (ns * ns)) * cross(cross(s, delta), s) : delta;
  const double np = norm(perp);
  auto term = [&](double u, double v) {
    const double b = u * ns;
    const double q = (2 * u * sd + nd * nd) / (b * b);
    // near the peak q cancels badly; use the distance directly
    if (q < -0.5 || q > 1e8) {
      const double dist = std::hypot(v * ns, np);
      if (dist == 0.0) return 0.0;  // exact hit of the integrable singularity
      return jac * (std::pow(u, alpha / 2) * std::pow(dist, -alpha) - std::pow(u, -alpha / 2) * std::pow(ns, -alpha));
    }
    return jac * std::pow(u, -alpha / 2) * std::pow(ns, -alpha) * std::expm1(-(alpha / 2) * std::log1p(q));
  };
  auto f = [&](double u) { return u <= 0 ? 0.0 : term(u, u - uc); };
  // integrated in v = u - uc so the peak is resolved in relative precision
  auto fv = [&](double v) {
    const double u = uc + v;
    return u <= 0 ? 0.0 : term(u, v);
  };

  const double upper = std::max(4 * uc, 4 * nd / ns);
  boost::math::quadrature::tanh_sinh<double> ts;
  // a nearly antiparallel delta makes a peak of width |perp| / |s| at uc:
  // grade the pieces towards it by factors of 100
  std::vector<double> cuts{-uc, upper - uc};
  if (uc > 0) {
    cuts.push_back(0.0);
    cuts.push_back(-uc / 2);
    for (double w = np / ns; w > 0 && w < uc / 200; w *= 100) {
      cuts.push_back(-w);
      cuts.push_back(w);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  // the piece touching u = 0 stays in u, where its u^{-alpha/2} endpoint
  // singularity is resolved
  total += ts.integrate(f, 0.0, uc + cuts[1], kQuadTol);
  for (std::size_t c = 1; c + 1 < cuts.size(); ++c)
    if (cuts[c + 1] > cuts[c]) total += ts.integrate(fv, cuts[c], cuts[c + 1], kQuadTol);
  // tail through u = 1/w; the integrand decays like u^{-1-alpha/2}
  auto g = [&](double w) {
    if (w <= 0) return 0.0;
    if (w < 1e-30) return -jac * alpha * sd * std::pow(ns, -alpha - 2) * std::pow(w, alpha / 2 - 1);
    return f(1 / w) / (w * w);
  };
  total += ts.integrate(g, 0.0, 1 / upper, kQuadTol);
  return total;
}

VariationOutcome standard_variation_test(const std::vector<Vec3>& sbar, const std::vector<Vec3>& delta,
                                         double alpha) {
  if (sbar.size() != delta.size()) fail(ErrorCode::kInvalidParameter, "sbar and delta differ in size");
  check_points(sbar);
  bool strict = false;
  for (std::size_t i = 0; i < sbar.size(); ++i)
    for (std::size_t j = i + 1; j < sbar.size(); ++j) {
      const double v = s_integral(sbar[i] - sbar[j], delta[i] - delta[j], alpha);
      if (v > 1e-12) return VariationOutcome::Inconclusive;
      if (v <= -1e-9) strict = true;
    }
  return strict ? VariationOutcome::Decreases : VariationOutcome::Inconclusive;
}

double circle_average(const std::vector<Vec3>& sbar, int i, const Vec3& axis, double radius,
                      const SymmetryGroup& gs, double alpha) {
  check_alpha(alpha);
  if (static_cast<int>(sbar.size()) != gs.n()) fail(ErrorCode::kInvalidParameter, "sbar size differs from n");
  if (i < 0 || i >= gs.n()) fail(ErrorCode::kInvalidParameter, "body index out of range");
  check_points(sbar);
  if (radius == 0.0) return 0.0;
  if (!(norm(axis) > 0) || !(radius > 0)) fail(ErrorCode::kInvalidParameter, "circle needs an axis and radius > 0");
  const Vec3 n = normalized(axis), e1 = any_orthogonal(n), e2 = cross(n, e1);
  for (const auto& e : gs.elements()) {
    if (std::fabs(std::fabs(dot(e.rho * n, n)) - 1) > 1e-7)
      fail(ErrorCode::kInvalidWitness, "circle is not invariant under the group");
    if (e.sigma[static_cast<std::size_t>(i)] == i && (norm(e.rho * e1 - e1) > 1e-7 || norm(e.rho * e2 - e2) > 1e-7))
      fail(ErrorCode::kInvalidWitness, "circle is not fixed by the isotropy of the body");
  }
  // delta_j = rho(g) c for the g moving i to j, so delta_i - delta_j = (1 - rho(g)) c
  const auto mv = movers(gs, i);
  double total = 0;
  for (int j = 0; j < gs.n(); ++j) {
    if (j == i) continue;
    const auto* g = mv[static_cast<std::size_t>(j)];
    const Mat3 A = g ? Mat3::identity() - g->rho : Mat3::identity();
    const Vec3 s = sbar[static_cast<std::size_t>(i)] - sbar[static_cast<std::size_t>(j)];
    auto d = [&](double th) { return A * (radius * (std::cos(th) * e1 + std::sin(th) * e2)); };
    total += periodic_integral([&](double th) { return s_integral(s, d(th), alpha); }, singular_angles(d, s), 1e-10);
  }
  return total / (2 * std::numbers::pi);
}

SphereAverage sphere_average(const std::vector<Vec3>& sbar, int i, const SymmetryGroup& gs, double alpha) {
  check_alpha(alpha);
  if (static_cast<int>(sbar.size()) != gs.n()) fail(ErrorCode::kInvalidParameter, "sbar size differs from n");
  if (i < 0 || i >= gs.n()) fail(ErrorCode::kInvalidParameter, "body index out of range");
  check_points(sbar);
  for (const auto& e : gs.elements()) {
    if (e.rho.det() < 0) fail(ErrorCode::kInvalidWitness, "the group contains an orientation-reversing element");
    if (e.sigma[static_cast<std::size_t>(i)] == i && !same_matrix(e.rho, Mat3::identity(), 1e-7))
      fail(ErrorCode::kInvalidWitness, "the permutation isotropy of the body is not trivial");
  }
  const auto mv = movers(gs, i);
  boost::math::quadrature::tanh_sinh<double> ts;
  SphereAverage out;
  for (int j = 0; j < gs.n(); ++j) {
    if (j == i) continue;
    const auto* g = mv[static_cast<std::size_t>(j)];
    SphereTerm term;
    term.body = j;
    term.c_g = g ? 2 * std::sin(rotation_angle(g->rho) / 2) : 0.0;
    const Vec3 s = sbar[static_cast<std::size_t>(i)] - sbar[static_cast<std::size_t>(j)];
    if (g && same_matrix(g->rho, Mat3::identity(), 1e-12)) {
      out.terms.push_back(term);  // delta_i = delta_j: no variation
      continue;
    }
    if (g) {
      // (1 - rho) u = c_g sin(theta) w(phi) with w a unit vector in the plane
      // orthogonal to the axis, and S(s, l d) = l^{1 - alpha/2} S(s, d), so the
      // sphere integral factors into a polar Beta integral times a circle average.
      const Vec3 a = rotation_axis(g->rho), e1 = any_orthogonal(a), e2 = cross(a, e1);
      auto w = [&](double ph) { return std::cos(ph) * e1 + std::sin(ph) * e2; };
      const double circle =
          periodic_integral([&](double ph) { return s_integral(s, w(ph), alpha); }, singular_angles(w, s), 1e-11) /
          (2 * std::numbers::pi);
      const double kappa = (1 - alpha / 2) / 2;
      const double polar = std::sqrt(std::numbers::pi) * std::tgamma(kappa + 1) / std::tgamma(kappa + 1.5);
      term.average = std::pow(term.c_g, 1 - alpha / 2) * polar * circle / 2;
    } else {
      // delta_i - delta_j = u: S depends only on the angle between u and s
      const Vec3 sh = normalized(s), e1 = any_orthogonal(sh);
      auto f = [&](double z) {
        const double v = s_integral(s, z * sh + std::sqrt(std::max(0.0, 1 - z * z)) * e1, alpha);
        return std::isfinite(v) ? v : 0.0;
      };
      term.average = ts.integrate(f, -1.0, 1.0, 1e-11) / 2;
    }
    out.value += term.average;
    out.terms.push_back(term);
  }
  return out;
}


}  // namespace equiorbit
