#include <random>
#include <sstream>

#include "classify.hpp"
#include "io.hpp"
#include "oracles.hpp"
#include "plot.hpp"
#include "test_helpers.hpp"

using namespace equiorbit;

namespace {

SymmetryGroup load(const std::string& name) {
  return group_from_json(parse_json(read_text_file(std::string(EO_DATA_DIR) + "/groups/" + name)));
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("shipped group files") {
  CHECK(load("icosa.json").n() == 60);
  CHECK(load("icosa.json").order() == 120);
  CHECK(load("tetra12.json").n() == 12);
  CHECK(load("dihedral4.json").n() == 4);
  CHECK(load("antisym3.json").n() == 3);
}

TEST_CASE("decompose output is a fixed point of build") {
  for (const char* f : {"icosa.json", "tetra12.json", "dihedral4.json", "antisym3.json"}) {
    CAPTURE(f);
    const SymmetryGroup g = load(f);
    const Json d1 = decomposition_to_json(g, decompose(g));
    const SymmetryGroup h = group_from_json(d1);
    const Json d2 = decomposition_to_json(h, decompose(h));
    CHECK(d1.dump() == d2.dump());
  }
}

TEST_CASE("generator form round trip") {
  for (const SymmetryGroup& g : {oracle::odd_pair(), oracle::rotating_choreography(4), oracle::dihedral_four_body()}) {
    const Json j = group_to_json(g);
    const SymmetryGroup h = group_from_json(parse_json(j.dump()));
    CHECK(h.n() == g.n());
    CHECK(h.order() == g.order());
    for (const auto& e : g.elements()) CHECK(h.contains(e));
  }
}

TEST_CASE("permutations in files are 1-based") {
  const char* text = R"({"n": 2, "generators": [{"tau": {"kind": "rotation", "offset": "1/2"},
                           "rho": "minus_identity", "sigma": [2, 1]}]})";
  const SymmetryGroup g = group_from_json(parse_json(text));
  CHECK(g.order() == 2);
  CHECK(g.elements()[1].sigma == Permutation{1, 0});
  const char* bad = R"({"n": 2, "generators": [{"tau": {"kind": "rotation", "offset": "1/2"}, "rho": "identity", "sigma": [0, 1]}]})";
  CHECK(error_of([&] { group_from_json(parse_json(bad)); }) == ErrorCode::kParse);
}

TEST_CASE("malformed input") {
  CHECK(error_of([] { parse_json("{\"n\": "); }) == ErrorCode::kParse);
  CHECK(error_of([] { read_text_file("/nonexistent/file.json"); }) == ErrorCode::kIo);
  CHECK_THROWS_AS(group_from_json(parse_json(R"({"n": "three"})")), Error);
}

TEST_CASE("named matrix groups") {
  const Json j = matrix_group_to_json(build_named({Family::O, 0}));
  const MatrixGroup g = matrix_group_from_json(j);
  CHECK(g.order() == 24);
  CHECK(recognize(g) == Label{Family::O, 0});
  CHECK(label_from_json(label_to_json({Family::D2pDp, 3})) == Label{Family::D2pDp, 3});
}

TEST_CASE("trajectory round trip is exact") {
  std::mt19937_64 rng(6);
  const FourierLoop x = oracle::random_loop(3, 5, rng);
  TrajectoryMeta meta{{1.0, 2.0, 0.5}, 1.5, {0, 0, 0.25}, Vec3{0, 0, 1}};
  const std::string text = trajectory_to_json(x, meta, 16);
  TrajectoryMeta back;
  const FourierLoop y = trajectory_from_json(parse_json(text), &back);
  CHECK(y.distance(x) == 0.0);
  CHECK(back.masses == meta.masses);
  CHECK(back.alpha == 1.5);
  CHECK(back.omega[2] == 0.25);
  REQUIRE(back.view_axis.has_value());
  CHECK((*back.view_axis)[2] == 1.0);
  const Json j = parse_json(text);
  CHECK(j["samples"].size() == 16);
  CHECK(trajectory_to_json(y, back, 16) == text);
}

TEST_CASE("reports serialize") {
  const SymmetryGroup g = load("antisym3.json");
  const Json r = report_to_json(g, check_group(g));
  CHECK(r["n"] == 3);
  CHECK(r["theorem_A"] == true);
  CHECK(r.contains("verdicts"));
  MinimizeReport m;
  m.final_action = std::numeric_limits<double>::infinity();
  CHECK(minimize_report_to_json(m)["final_action"].is_null());
  const Json row = catalog_entry_to_json(catalog_entry({Family::Y, 0}));
  CHECK(row["order"] == 60);
}

TEST_CASE("plots are deterministic") {
  std::mt19937_64 rng(1);
  const FourierLoop x = oracle::random_loop(3, 4, rng);
  const std::string a = render_svg(x), b = render_svg(x);
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("polyline") != std::string::npos);
  PlotOptions side;
  side.view = {1, 0, 0};
  CHECK(render_svg(x, side) != a);
  const std::string csv = render_csv(x, 8);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,body,x,y,z");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 8 * 3);
}

}  // TEST_SUITE
