#include "minimize.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace equiorbit;

namespace {

MinimizeOptions quick(int modes = 8) {
  MinimizeOptions o;
  o.modes = modes;
  return o;
}

}  // namespace

TEST_SUITE("minimize") {

TEST_CASE("three-body anti-symmetric orbit") {
  const SymmetryGroup g = oracle::three_body_antisymmetric();
  const MinimizeResult r = minimize(g, {}, 1.0, 1, quick());
  CHECK(r.report.converged);
  CHECK(r.report.collisionless);
  CHECK(r.report.grad_norm < 1e-8);
  CHECK(r.report.min_mutual_distance > kCollisionTol);
  CHECK(equivariant_project(g, r.loop).distance(r.loop) < 1e-12);
  REQUIRE(r.report.ode_residual.has_value());
  CHECK(*r.report.ode_residual < 1e-5);
  const auto& log = r.report.action_log;
  REQUIRE(log.size() >= 2);
  for (std::size_t i = 1; i < log.size(); ++i) CHECK(log[i] <= log[i - 1] + 1e-12 * (1 + std::fabs(log[i - 1])));
  CHECK(r.report.final_action == doctest::Approx(eval_action(r.loop, g.masses(), 1.0, {}).value).epsilon(1e-12));
}

TEST_CASE("same seed, same result") {
  const SymmetryGroup g = oracle::dihedral_four_body();
  MinimizeOptions o = quick(6);
  o.verify = false;
  const MinimizeResult a = minimize(g, {}, 1.0, 7, o), b = minimize(g, {}, 1.0, 7, o);
  CHECK(a.loop.distance(b.loop) == 0.0);
  CHECK(a.report.final_action == b.report.final_action);
  CHECK(a.report.iterations == b.report.iterations);
}

TEST_CASE("warm start and polish") {
  const SymmetryGroup g = oracle::three_body_antisymmetric();
  MinimizeOptions o = quick(6);
  o.verify = false;
  const MinimizeResult a = minimize(g, {}, 1.0, 3, o);
  MinimizeOptions w = quick(10);
  w.verify = false;
  w.warm_start = a.loop;
  const MinimizeResult b = minimize(g, {}, 1.0, 3, w);
  CHECK(b.loop.modes == 10);
  CHECK(b.report.final_action <= a.report.final_action + 1e-9);
  MinimizeOptions p = quick(6);
  p.verify = false;
  p.polish_modes = 10;
  const MinimizeResult c = minimize(g, {}, 1.0, 3, p);
  CHECK(c.loop.modes == 10);
  CHECK(c.report.converged);
}

TEST_CASE("argument checks") {
  const SymmetryGroup g = oracle::three_body_antisymmetric();
  CHECK(error_of([&] { minimize(g, {}, 2.0, 1, quick()); }) == ErrorCode::kInvalidParameter);
  CHECK(error_of([&] { minimize(g, {}, 0.0, 1, quick()); }) == ErrorCode::kInvalidParameter);
  SymmetryElement e;
  e.rho = -Mat3::identity();
  e.sigma = identity_permutation(1);
  const SymmetryGroup pinned = make_group(std::span(&e, 1), 1, {1.0});
  CHECK(error_of([&] { minimize(pinned, {}, 1.0, 1, quick()); }) == ErrorCode::kEmptyConstraint);
}

TEST_CASE("collision report") {
  FourierLoop x = FourierLoop::zero(2, 1, 1.0);
  x.coeffs[0][1][0] = Complex(1, 0);
  x.coeffs[1][1][0] = Complex(-1, 0);  // x_1 = -x_0 = 2 cos(2 pi t) e_x: meet at t = 1/4, 3/4
  const CollisionReport c = collision_report(x, 400);
  CHECK(c.min_distance < 1e-12);
  CHECK(c.body_a == 0);
  CHECK(c.body_b == 1);
  CHECK(c.time == doctest::Approx(0.25));
}

TEST_CASE("ODE check of the circular pair") {
  const double R = std::cbrt(1 / (16 * std::numbers::pi * std::numbers::pi));
  FourierLoop l = FourierLoop::zero(2, 1, 1.0);
  l.coeffs[0][1] = {Complex(R / 2, 0), Complex(0, -R / 2), Complex(0, 0)};
  l.coeffs[1][1] = {Complex(-R / 2, 0), Complex(0, R / 2), Complex(0, 0)};
  const OdeCheck ok = verify_ode(l, {1, 1}, 1.0, {});
  CHECK(ok.residual < 1e-8);
  // a wrong radius is not a solution
  FourierLoop bad = l;
  for (auto& body : bad.coeffs)
    for (auto& c : body[1]) c *= 1.2;
  CHECK(verify_ode(bad, {1, 1}, 1.0, {}).residual > 1e-3);
}

}  // TEST_SUITE
