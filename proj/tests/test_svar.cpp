#include <random>

#include "oracles.hpp"
#include "svar.hpp"
#include "test_helpers.hpp"

using namespace equiorbit;

namespace {

// bodies 0 and 1 swapped by rho
SymmetryGroup swapped_pair(const Mat3& rho) {
  SymmetryElement g;
  g.rho = rho;
  g.sigma = {1, 0};
  return make_group(std::span(&g, 1), 2, {1.0, 1.0});
}

}  // namespace

TEST_SUITE("svar") {

TEST_CASE("zero variation") {
  CHECK(s_integral({1, 2, 3}, {0, 0, 0}, 1.0) == 0.0);
  CHECK(s_integral({-1, 0, 0}, {0, 0, 0}, 0.5) == 0.0);
}

TEST_CASE("agreement with direct quadrature") {
  std::mt19937_64 rng(5);
  std::lognormal_distribution<double> mag(0, 1);
  for (double a : {0.5, 1.0, 1.5})
    for (int c = 0; c < 20; ++c) {
      const Vec3 s = oracle::random_vec(rng);
      const Vec3 d = mag(rng) * oracle::random_vec(rng);
      const double ref = oracle::brute_s_integral(s, d, a);
      CHECK(std::fabs(s_integral(s, d, a) - ref) <= 1e-9 * std::fabs(ref));
    }
}

TEST_CASE("scaling laws") {
  // S(l s, d) = l^{-(2+a)/2} S(s, d) and S(m s, m d) = m^{-a} S(s, d)
  const Vec3 s{0.3, -1.1, 0.4}, d{0.7, 0.2, -0.5};
  for (double a : {0.5, 1.0, 1.5}) {
    const double base = s_integral(s, d, a);
    const double l = 2.7;
    CHECK(s_integral(l * s, d, a) == doctest::Approx(std::pow(l, -(2 + a) / 2) * base).epsilon(1e-9));
    CHECK(s_integral(l * s, l * d, a) == doctest::Approx(std::pow(l, -a) * base).epsilon(1e-9));
  }
}

TEST_CASE("antiparallel variations") {
  const Vec3 s{1, 0, 0}, d{-2, 0, 0};
  CHECK(std::isinf(s_integral(s, d, 1.0)));
  CHECK(std::isinf(s_integral(s, d, 1.5)));
  CHECK(std::isfinite(s_integral(s, d, 0.5)));
  // perturbing delta off the axis by e shifts S by O(e^{1-alpha})
  CHECK(s_integral(s, d, 0.5) == doctest::Approx(oracle::brute_s_integral(s, {-2, 1e-14, 0}, 0.5)).epsilon(1e-5));
}

TEST_CASE("parameter checks") {
  CHECK(error_of([] { s_integral({1, 0, 0}, {0, 1, 0}, 2.0); }) == ErrorCode::kUnsupportedExponent);
  CHECK(error_of([] { s_integral({1, 0, 0}, {0, 1, 0}, 0.0); }) == ErrorCode::kInvalidParameter);
  CHECK(error_of([] { s_integral({0, 0, 0}, {0, 1, 0}, 1.0); }) == ErrorCode::kInvalidParameter);
}

TEST_CASE("orthogonal variation decreases the action") {
  // |us + d|^{-a} < |us|^{-a} pointwise when d is orthogonal to s
  const double v = s_integral({1, 0, 0}, {0, 1, 0}, 1.0);
  CHECK(v < 0);
  CHECK(standard_variation_test({{0, 0, 0}, {1, 0, 0}}, {{0, 0, 0}, {0, 1, 0}}) == VariationOutcome::Decreases);
  CHECK(standard_variation_test({{0, 0, 0}, {1, 0, 0}}, {{0, 0, 0}, {0, 0, 0}}) == VariationOutcome::Inconclusive);
  CHECK(error_of([] { standard_variation_test({{0, 0, 0}, {0, 0, 0}}, {{0, 0, 0}, {0, 1, 0}}); }) ==
        ErrorCode::kInvalidConfiguration);
}

TEST_CASE("circle average against direct quadrature") {
  // kappa flips the z axis, so the circle in the xy plane is invariant
  const SymmetryGroup g = swapped_pair(kappa());
  const std::vector<Vec3> sbar{{0, 1, 1}, kappa() * Vec3{0, 1, 1}};
  const double r = 0.6;
  for (double a : {0.5, 1.0, 1.5}) {
    const double got = circle_average(sbar, 0, {0, 0, 1}, r, g, a);
    // the variation (0, 2 r sin th, 0) vanishes at th = 0, pi: grade towards both
    const oracle::GaussRule rule(16);
    auto f = [&](double th) {
      const Vec3 c{r * std::cos(th), r * std::sin(th), 0};
      return oracle::brute_s_integral(sbar[0] - sbar[1], c - kappa() * c, a);
    };
    const double pi = std::numbers::pi;
    const double ref = (oracle::panel_integral(f, oracle::graded_cuts(0, pi, true, true, 30), rule) +
                        oracle::panel_integral(f, oracle::graded_cuts(pi, 2 * pi, true, true, 30), rule)) /
                       (2 * pi);
    CHECK(got == doctest::Approx(ref).epsilon(1e-6));
    CHECK(got < 0);
  }
}

TEST_CASE("circle average scales with the radius") {
  const SymmetryGroup g = swapped_pair(kappa());
  const std::vector<Vec3> sbar{{0, 1, 1}, kappa() * Vec3{0, 1, 1}};
  CHECK(circle_average(sbar, 0, {0, 0, 1}, 0.0, g) == 0.0);
  for (double lam : {0.5, 2.0}) CHECK(circle_average(sbar, 0, {0, 0, 1}, lam * 0.6, g) < 0);
}

TEST_CASE("sphere average against direct quadrature") {
  // a half turn about z swapping two bodies, and a third body outside the orbit
  SymmetryElement e;
  e.rho = rotation_zeta(2);
  e.sigma = {1, 0, 2};
  const SymmetryGroup g = make_group(std::span(&e, 1), 3, {1.0, 1.0, 1.0});
  const std::vector<Vec3> sbar{{1, 0, 0.5}, rotation_zeta(2) * Vec3{1, 0, 0.5}, {0.2, 0.9, -0.7}};
  const Mat3 one_minus = Mat3::identity() - rotation_zeta(2);
  const oracle::GaussRule rule(12);
  const double pi = std::numbers::pi;
  for (double a : {0.5, 1.0, 1.5}) {
    const SphereAverage got = sphere_average(sbar, 0, g, a);
    REQUIRE(got.terms.size() == 2);
    CHECK(got.terms[0].c_g == doctest::Approx(2.0));
    CHECK(got.terms[1].c_g == 0.0);

    // partner 1: delta = (1 - zeta_2) u vanishes at the poles and points along
    // -s = (-2, 0, 0) on the meridian phi = pi; flatten both with x^4
    const Vec3 s1 = sbar[0] - sbar[1];
    auto inner1 = [&](double z) {
      const double rho = std::sqrt(std::max(0.0, 1 - z * z));
      auto f = [&](double ph) {
        const double v = s_integral(s1, one_minus * Vec3{rho * std::cos(ph), rho * std::sin(ph), z}, a);
        return std::isfinite(v) ? v : 0.0;
      };
      return oracle::substituted_integral(f, pi, pi, 4, 4, rule);
    };
    auto from_poles = [&](double y) { return inner1(y > 0 ? 1 - y : -1 - y); };
    const double ref1 = oracle::substituted_integral(from_poles, 0, 1, 4, 4, rule) / (4 * pi);

    // partner 2 sits outside the orbit, delta = u: closed-form shell average
    const double ref2 = oracle::sphere_shift_average(sbar[0] - sbar[2], a);

    CHECK(got.terms[0].average == doctest::Approx(ref1).epsilon(1e-6));
    CHECK(got.terms[1].average == doctest::Approx(ref2).epsilon(1e-6));
    CHECK(got.value == doctest::Approx(ref1 + ref2).epsilon(1e-6));
    CHECK(got.value < 0);
  }
}

TEST_CASE("sphere average needs an orientation-preserving group") {
  const SymmetryGroup g = swapped_pair(-Mat3::identity());
  CHECK(error_of([&] { sphere_average({{1, 0, 0}, {-1, 0, 0}}, 0, g); }) == ErrorCode::kInvalidWitness);
}

}  // TEST_SUITE
