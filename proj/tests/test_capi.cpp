// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <equiorbit/equiorbit.h>
#include <json.hpp>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  eo_string_free(s);
  return out;
}

nlohmann::json parse(char* s) { return nlohmann::json::parse(take(s)); }

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(EO_DATA_DIR) + "/groups/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Group {
  eo_group* g = nullptr;
  explicit Group(const std::string& json) { REQUIRE(eo_group_from_json(json.c_str(), &g) == EO_OK); }
  ~Group() { eo_group_free(g); }
};

}  // namespace

TEST_CASE("library metadata") {
  CHECK(std::strlen(eo_version()) > 0);
  CHECK(std::string(eo_status_name(EO_PARSE)) == "parse-error");
  CHECK(std::string(eo_status_name(EO_OK)) == "ok");
  CHECK(eo_thread_count() >= 1);
}

TEST_CASE("catalog") {
  char* out = nullptr;
  REQUIRE(eo_catalog_json("Y", 0, 0, &out) == EO_OK);
  const auto y = parse(out);
  REQUIRE(y.size() == 1);
  CHECK(y[0]["order"] == 60);
  REQUIRE(eo_catalog_json(nullptr, 0, 4, &out) == EO_OK);
  CHECK(take(out).find("OT") != std::string::npos);
  REQUIRE(eo_catalog_json("Pprime", 3, 0, &out) == EO_OK);
  CHECK(parse(out).size() == 1);
  CHECK(eo_catalog_json("nonsense", 0, 0, &out) == EO_INVALID_PARAMETER);
  CHECK(std::strlen(eo_last_error()) > 0);
  REQUIRE(eo_admissible_extensions_json("{\"name\":\"T\"}", &out) == EO_OK);
  const auto ext = parse(out);
  REQUIRE(ext.size() == 1);
  CHECK(ext[0]["symbol"] == "O");
}

TEST_CASE("group handles") {
  Group g(slurp("antisym3.json"));
  size_t order = 0;
  int n = 0;
  REQUIRE(eo_group_order(g.g, &order) == EO_OK);
  REQUIRE(eo_group_bodies(g.g, &n) == EO_OK);
  CHECK(order == 6);
  CHECK(n == 3);
  char* out = nullptr;
  REQUIRE(eo_group_check_json(g.g, nullptr, &out) == EO_OK);
  CHECK(parse(out)["theorem_A"] == true);
  REQUIRE(eo_group_decompose_json(g.g, &out) == EO_OK);
  CHECK(parse(out)["components"][0]["k"] == 3);
  eo_group* sum = nullptr;
  REQUIRE(eo_group_sum(g.g, g.g, &sum) == EO_OK);
  CHECK(eo_group_bodies(sum, &n) == EO_OK);
  CHECK(n == 6);
  eo_group_free(sum);
  eo_group* other = nullptr;
  Group d(slurp("dihedral4.json"));
  CHECK(eo_group_sum(g.g, d.g, &other) == EO_INCOMPATIBLE_SUM);
  CHECK(other == nullptr);
}

TEST_CASE("errors are reported, not thrown") {
  eo_group* g = nullptr;
  CHECK(eo_group_from_json("{", &g) == EO_PARSE);
  CHECK(g == nullptr);
  CHECK(eo_group_from_json(nullptr, &g) == EO_INVALID_PARAMETER);
  double v = 0;
  const double s[3] = {1, 0, 0}, d[3] = {0, 1, 0};
  CHECK(eo_s_integral(s, d, 2.5, &v) == EO_UNSUPPORTED_EXPONENT);
  REQUIRE(eo_s_integral(s, d, 1.0, &v) == EO_OK);
  CHECK(v < 0);
}

TEST_CASE("frame normalization") {
  const char* text = R"({"n": 3, "generators": [{"tau": {"kind": "rotation", "offset": "1/3"},
      "rho": {"name": "zeta", "p": 3}, "sigma": [2, 3, 1]}]})";
  Group g(text);
  eo_group* red = nullptr;
  double theta = 0, axis[3] = {0, 0, 0};
  REQUIRE(eo_group_normalize_frame(g.g, &red, &theta, axis) == EO_OK);
  CHECK(std::fabs(std::fabs(theta) - 2 * M_PI) < 1e-12);
  CHECK(std::fabs(std::fabs(axis[2]) - 1) < 1e-12);
  eo_group_free(red);
}

TEST_CASE("minimize, serialize, verify, plot") {
  Group g(slurp("antisym3.json"));
  eo_minimize_options o;
  eo_minimize_options_default(&o);
  o.modes = 8;
  eo_loop* loop = nullptr;
  char* report = nullptr;
  const double omega[3] = {0, 0, 0};
  REQUIRE(eo_minimize(g.g, omega, 1.0, 1, &o, nullptr, &loop, &report) == EO_OK);
  const auto rep = parse(report);
  CHECK(rep["collisionless"] == true);
  CHECK(rep["converged"] == true);

  double a = 0;
  REQUIRE(eo_loop_action(loop, &a) == EO_OK);
  CHECK(a > 0);

  char* text = nullptr;
  REQUIRE(eo_loop_to_json(loop, 0, &text) == EO_OK);
  const std::string traj = take(text);
  eo_loop* back = nullptr;
  REQUIRE(eo_loop_from_json(traj.c_str(), &back) == EO_OK);
  double b = 0;
  REQUIRE(eo_loop_action(back, &b) == EO_OK);
  CHECK(a == b);

  REQUIRE(eo_loop_verify_json(back, &text) == EO_OK);
  CHECK(parse(text)["ode_residual"].get<double>() < 1e-5);

  REQUIRE(eo_loop_plot(back, "svg", nullptr, 128, &text) == EO_OK);
  const std::string svg = take(text);
  REQUIRE(eo_loop_plot(back, "svg", nullptr, 128, &text) == EO_OK);
  CHECK(take(text) == svg);
  CHECK(eo_loop_plot(back, "png", nullptr, 128, &text) == EO_INVALID_PARAMETER);

  eo_loop* warm = nullptr;
  o.modes = 10;
  REQUIRE(eo_minimize(g.g, omega, 1.0, 1, &o, back, &warm, &report) == EO_OK);
  eo_string_free(report);
  double c = 0;
  REQUIRE(eo_loop_action(warm, &c) == EO_OK);
  CHECK(c <= a + 1e-9);

  eo_loop_free(warm);
  eo_loop_free(back);
  eo_loop_free(loop);
}
