#include <random>

#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace equiorbit;

TEST_SUITE("pointgroups") {

TEST_CASE("catalog rows match the transcribed tables up to p = 12") {
  for (const auto& row : oracle::catalog_rows(12)) {
    CAPTURE(to_string(row.label));
    const CatalogEntry e = catalog_entry(row.label);
    CHECK(e.order == row.order);
    CHECK(e.generators == row.generators);
    CHECK(e.normalizer.symbol == row.normalizer);
    CHECK(e.normalizer.generators == row.normalizer_generators);
    const MatrixGroup g = build_named(row.label);
    CHECK(static_cast<int>(g.order()) == row.order);
    if (row.normalizer_order > 0) {
      REQUIRE(e.normalizer.group.has_value());
      CHECK(static_cast<int>(e.normalizer.group->order()) == row.normalizer_order);
      CHECK(g.is_subgroup_of(*e.normalizer.group));
      for (const Mat3& m : e.normalizer.group->elements()) CHECK(g.normalized_by(m));
    } else {
      CHECK(e.normalizer.continuous);
    }
  }
}

TEST_CASE("named orders") {
  CHECK(build_named({Family::Y, 0}).order() == 60);
  CHECK(build_named({Family::IxY, 0}).order() == 120);
  CHECK(build_named({Family::OT, 0}).order() == 24);
  CHECK_FALSE(build_named({Family::OT, 0}).contains_minus_identity());
  CHECK(build_named({Family::IxT, 0}).contains_minus_identity());
}

TEST_CASE("recognize survives conjugation") {
  std::mt19937_64 rng(11);
  for (const auto& row : oracle::catalog_rows(12)) {
    const MatrixGroup g = build_named(row.label);
    CHECK(recognize(g) == canonical(row.label));
    const MatrixGroup h = g.conjugated(oracle::random_rotation(rng));
    CHECK(recognize(h) == canonical(row.label));
  }
}

TEST_CASE("aliases resolve by parity") {
  CHECK(canonical({Family::Pprime, 3}) == Label{Family::IxC, 3});
  CHECK(canonical({Family::Pprime, 2}) == Label{Family::C2pCp, 2});
  CHECK(canonical({Family::Cph, 2}) == Label{Family::IxC, 2});
  CHECK(canonical({Family::Cph, 3}) == Label{Family::C2pCp, 3});
  CHECK(canonical({Family::C, 1}) == Label{Family::Trivial, 0});
  CHECK(canonical({Family::D, 1}) == Label{Family::C, 2});
  // P'_{2p} is generated by a rotatory reflection of order 2p
  for (int p = 1; p <= 8; ++p) {
    const MatrixGroup g = build_named(canonical({Family::Pprime, p}));
    CHECK(static_cast<int>(g.order()) == 2 * p);
    bool cyclic = false;
    for (const Mat3& m : g.elements()) cyclic |= m.det() < 0 && matrix_order(m) == 2 * p;
    CHECK(cyclic);
  }
}

TEST_CASE("generator matrices") {
  for (int p = 1; p <= 12; ++p) CHECK(matrix_order(rotation_zeta(p)) == p);
  CHECK(matrix_order(kappa()) == 2);
  CHECK(matrix_order(pi3()) == 3);
  CHECK(matrix_order(pi3_prime()) == 3);
  CHECK(is_orthogonal(pi3_prime()));
}

TEST_CASE("infinite generation is rejected") {
  const Mat3 r = axis_rotation({0, 0, 1}, 1.0);
  CHECK(error_of([&] { MatrixGroup::generate(std::span(&r, 1)); }) == ErrorCode::kNotFinite);
}

TEST_CASE("non-orthogonal matrices are rejected") {
  Mat3 m = Mat3::identity();
  m(0, 1) = 0.3;
  CHECK(error_of([&] { require_orthogonal(m); }) == ErrorCode::kInvalidParameter);
}

TEST_CASE("family names parse") {
  CHECK(parse_family("IxO") == Family::IxO);
  CHECK(parse_family("D2pDp") == Family::D2pDp);
  CHECK_THROWS_AS(parse_family("Q"), Error);
}

TEST_CASE("mixed groups") {
  // H u -(G \ H) with G = D_p, H = C_p gives D_pC_p
  for (int p = 2; p <= 6; ++p) {
    const MatrixGroup m = mixed_group(build_named({Family::D, p}), build_named({Family::C, p}));
    CHECK(recognize(m) == Label{Family::DpCp, p});
  }
  CHECK(recognize(mixed_group(build_named({Family::O, 0}), build_named({Family::T, 0}))) == Label{Family::OT, 0});
}

}  // TEST_SUITE
