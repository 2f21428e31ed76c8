#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "error.hpp"

namespace equiorbit {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::kParse, what); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double get_number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

std::int64_t get_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

Fraction fraction_from_json(const Json& j) {
  if (j.is_number_integer()) return Fraction(j.get<std::int64_t>(), 1);
  if (!j.is_string()) bad("time offsets must be strings \"q/m\"");
  try {
    return Fraction::parse(j.get<std::string>());
  } catch (const std::logic_error&) {
    bad("malformed fraction \"" + j.get<std::string>() + "\"");
  }
}

Json vec_to_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Vec3 vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) bad("vectors must have three entries");
  return {get_number(j[0], "vector entry"), get_number(j[1], "vector entry"), get_number(j[2], "vector entry")};
}

std::vector<double> masses_from_json(const Json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) bad("\"masses\" must list one mass per body");
  std::vector<double> m;
  for (const auto& x : j) m.push_back(get_number(x, "mass"));
  return m;
}

std::string fmt17(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::kInvalidParameter, "cannot serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json time_to_json(const TimeIsometry& t) {
  return Json{{"kind", t.is_reflection() ? "reflection" : "rotation"}, {"offset", t.offset.str()}};
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

Json matrix_to_json(const Mat3& m) {
  Json rows = Json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(Json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

Mat3 matrix_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 3) bad("matrices must have three rows");
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
      const Vec3 row = vec_from_json(j[static_cast<std::size_t>(r)]);
      for (int c = 0; c < 3; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    if (!is_orthogonal(m, 1e-9)) fail(ErrorCode::kInvalidParameter, "matrix is not orthogonal");
    return m;
  }
  std::string name;
  int p = 0;
  bool negate = false;
  Json mat;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object()) {
    if (!need(j, "name").is_string()) bad("\"name\" must be a string");
    name = j.at("name").get<std::string>();
    if (j.contains("p")) p = static_cast<int>(get_int(j.at("p"), "p"));
    if (j.contains("negate")) {
      if (!j.at("negate").is_boolean()) bad("\"negate\" must be boolean");
      negate = j.at("negate").get<bool>();
    }
    if (j.contains("matrix")) mat = j.at("matrix");
  } else {
    bad("matrix must be an array, a name, or an object");
  }
  Mat3 m;
  if (name == "matrix") {
    if (mat.is_null()) bad("\"matrix\" entry required");
    m = matrix_from_json(mat);
  } else if (name == "identity") {
    m = Mat3::identity();
  } else if (name == "minus_identity") {
    m = -Mat3::identity();
  } else if (name == "zeta") {
    if (p < 1) fail(ErrorCode::kInvalidParameter, "zeta needs p >= 1");
    m = rotation_zeta(p);
  } else if (name == "kappa") {
    m = kappa();
  } else if (name == "pi3") {
    m = pi3();
  } else if (name == "pi3_prime") {
    m = pi3_prime();
  } else {
    bad("unknown matrix name \"" + name + "\"");
  }
  return negate ? -m : m;
}

Json label_to_json(const Label& l) { return Json{{"name", family_name(l.family)}, {"p", l.p}}; }

Label label_from_json(const Json& j) {
  std::string name;
  int p = 0;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else {
    const Json& nj = need(j, "name");
    if (!nj.is_string()) bad("\"name\" must be a string");
    name = nj.get<std::string>();
    if (j.contains("p")) p = static_cast<int>(get_int(j.at("p"), "p"));
  }
  const Family f = parse_family(name);
  return make_label(f, has_parameter(f) ? p : 0);
}

Json matrix_group_to_json(const MatrixGroup& g) {
  const Label l = g.name() ? *g.name() : recognize(g);
  Json j = label_to_json(l);
  Json gens = Json::array();
  for (const Mat3& m : small_generating_set(g)) gens.push_back(matrix_to_json(m));
  j["generators"] = gens;
  return j;
}

MatrixGroup matrix_group_from_json(const Json& j) {
  if (j.is_object() && j.contains("generators")) {
    const Json& gj = j.at("generators");
    if (!gj.is_array()) bad("\"generators\" must be an array");
    std::vector<Mat3> gens;
    for (const auto& m : gj) gens.push_back(snap(matrix_from_json(m)));
    MatrixGroup g = MatrixGroup::generate(gens);
    const Label got = recognize(g);
    if (j.contains("name")) {
      const Label want = canonical(label_from_json(j));
      if (!(want == got)) fail(ErrorCode::kInvalidParameter, "generators span " + to_string(got) + ", not " + to_string(want));
    }
    return g.with_name(got);
  }
  MatrixGroup g = build_named(canonical(label_from_json(j)));
  if (j.is_object() && j.contains("frame")) g = g.conjugated(matrix_from_json(j.at("frame")));
  return g;
}

KrhData krh_from_json(const Json& j) {
  KrhData d;
  d.K = j.contains("K") ? matrix_group_from_json(j.at("K")) : MatrixGroup();
  if (j.contains("r")) d.r = snap(matrix_from_json(j.at("r")));
  if (j.contains("h") && !j.at("h").is_null()) d.h = snap(matrix_from_json(j.at("h")));
  if (j.contains("m")) d.m = get_int(j.at("m"), "m");
  if (d.m < 1) fail(ErrorCode::kInvalidParameter, "m must be positive");
  if (j.contains("time_origin")) d.time_origin = fraction_from_json(j.at("time_origin"));
  return d;
}

HatKrhData hat_from_json(const Json& j) {
  HatKrhData h;
  if (!j.is_object()) bad("components must be objects");
  h.Khat = j.contains("Khat") ? matrix_group_from_json(j.at("Khat")) : MatrixGroup();
  if (j.contains("k")) h.k = get_int(j.at("k"), "k");
  if (h.k < 1) fail(ErrorCode::kInvalidParameter, "k must be positive");
  if (j.contains("rhat")) h.rhat = snap(matrix_from_json(j.at("rhat")));
  if (j.contains("hhat") && !j.at("hhat").is_null()) h.hhat = snap(matrix_from_json(j.at("hhat")));
  if (j.contains("hhat_center")) h.hhat_center = get_int(j.at("hhat_center"), "hhat_center");
  if (j.contains("mass")) h.mass = get_number(j.at("mass"), "mass");
  return h;
}

SymmetryGroup group_from_json(const Json& j) {
  if (!j.is_object()) bad("group file must hold a JSON object");
  const double period = j.contains("period") ? get_number(j.at("period"), "period") : 1.0;
  if (!(period > 0)) fail(ErrorCode::kInvalidPeriod, "period must be positive");
  if (j.contains("krh")) {
    const KrhData krh = krh_from_json(j.at("krh"));
    const Json& cj = need(j, "components");
    if (!cj.is_array() || cj.empty()) bad("\"components\" must be a non-empty array");
    std::vector<HatKrhData> comps;
    for (const auto& c : cj) comps.push_back(hat_from_json(c));
    return group_from_data(krh, comps, period);
  }
  const int n = static_cast<int>(get_int(need(j, "n"), "n"));
  if (n < 1) fail(ErrorCode::kInvalidParameter, "n must be positive");
  std::vector<double> masses = j.contains("masses") ? masses_from_json(j.at("masses"), n)
                                                    : std::vector<double>(static_cast<std::size_t>(n), 1.0);
  const Json& gj = need(j, "generators");
  if (!gj.is_array()) bad("\"generators\" must be an array");
  std::vector<SymmetryElement> gens;
  for (const auto& e : gj) {
    SymmetryElement g;
    const Json& tj = need(e, "tau");
    const Json& kind = need(tj, "kind");
    const Fraction off = tj.contains("offset") ? fraction_from_json(tj.at("offset")) : Fraction();
    if (kind == "rotation")
      g.tau = TimeIsometry::rotation(off);
    else if (kind == "reflection")
      g.tau = TimeIsometry::reflection(off);
    else
      bad("tau.kind must be \"rotation\" or \"reflection\"");
    g.rho = snap(matrix_from_json(need(e, "rho")));
    const Json& sj = need(e, "sigma");
    if (!sj.is_array() || static_cast<int>(sj.size()) != n) bad("sigma must list n entries");
    for (const auto& x : sj) g.sigma.push_back(static_cast<int>(get_int(x, "sigma entry")) - 1);
    if (!is_permutation(g.sigma)) bad("sigma is not a permutation of 1..n (entries are 1-based)");
    gens.push_back(std::move(g));
  }
  return SymmetryGroup::make(gens, n, std::move(masses), period);
}

Json group_to_json(const SymmetryGroup& g) {
  Json j;
  j["n"] = g.n();
  j["masses"] = g.masses();
  j["period"] = g.period();
  Json gens = Json::array();
  for (const auto& e : g.generators()) {
    Json s = Json::array();
    for (int x : e.sigma) s.push_back(x + 1);
    gens.push_back(Json{{"tau", time_to_json(e.tau)}, {"rho", matrix_to_json(e.rho)}, {"sigma", s}});
  }
  j["generators"] = gens;
  return j;
}

Json decomposition_to_json(const SymmetryGroup& g, const Decomposition& d) {
  Json j;
  j["n"] = g.n();
  j["order"] = g.order();
  j["period"] = g.period();
  Json krh;
  krh["K"] = matrix_group_to_json(d.krh.K);
  krh["r"] = matrix_to_json(d.krh.r);
  krh["h"] = d.krh.h ? matrix_to_json(*d.krh.h) : Json(nullptr);
  krh["m"] = d.krh.m;
  krh["time_origin"] = d.krh.time_origin.str();
  j["krh"] = krh;
  Json comps = Json::array();
  for (std::size_t c = 0; c < d.hats.size(); ++c) {
    const auto& h = d.hats[c];
    Json cj;
    Json bodies = Json::array();
    for (int b : d.components[c]) bodies.push_back(b + 1);
    cj["bodies"] = bodies;
    cj["Khat"] = matrix_group_to_json(h.Khat);
    cj["k"] = h.k;
    cj["rhat"] = matrix_to_json(h.rhat);
    cj["hhat"] = h.hhat ? matrix_to_json(*h.hhat) : Json(nullptr);
    cj["hhat_center"] = h.hhat_center;
    cj["mass"] = h.mass;
    comps.push_back(cj);
  }
  j["components"] = comps;
  return j;
}

Json report_to_json(const SymmetryGroup& g, const GroupReport& r) {
  Json j;
  j["n"] = g.n();
  j["order"] = g.order();
  j["type_R"] = r.axes.kind != "none";
  Json basis = Json::array();
  for (const Vec3& v : r.axes.basis) basis.push_back(vec_to_json(v));
  j["axes"] = Json{{"kind", r.axes.kind}, {"basis", basis}};
  j["coercivity"] = to_string(r.coercivity);
  Json kcs = Json::array();
  for (const auto& k : r.kernel_cases) {
    Json kj;
    kj["case"] = to_string(k.tag);
    kj["core"] = k.core_label ? label_to_json(*k.core_label) : Json(nullptr);
    Json e = Json::array();
    for (const Vec3& v : k.E) e.push_back(vec_to_json(v));
    kj["E"] = e;
    if (k.tag == KernelCase::PlaneReflection) kj["reflection_family"] = k.reflection_family;
    kj["collision_evidence"] = k.collision_evidence;
    kcs.push_back(kj);
  }
  j["kernel_cases"] = kcs;
  Json verdicts = Json::array();
  for (const auto& iso : r.theorem_A.isotropies) {
    Json v;
    v["time"] = iso.time ? Json(iso.time->str()) : Json("generic");
    v["isotropy"] = label_to_json(iso.label);
    v["status"] = to_string(iso.verdict.status);
    if (iso.verdict.witness) {
      const Witness& w = *iso.verdict.witness;
      Json wj{{"index", w.index + 1}, {"kind", w.sphere ? "sphere" : "circle"}};
      if (!w.sphere) {
        wj["axis"] = vec_to_json(w.axis);
        wj["radius"] = w.radius;
      }
      v["witness"] = wj;
    } else {
      v["witness"] = nullptr;
    }
    v["excluded"] = iso.excluded;
    v["reason"] = iso.reason;
    verdicts.push_back(v);
  }
  j["verdicts"] = verdicts;
  j["theorem_A"] = r.theorem_A.pass;
  j["collision_evidence"] = r.collision_evidence ? Json(*r.collision_evidence) : Json(nullptr);
  return j;
}

Json catalog_entry_to_json(const CatalogEntry& e) {
  Json j;
  j["name"] = family_name(e.label.family);
  j["p"] = e.label.p;
  j["symbol"] = e.symbol;
  j["order"] = e.order;
  j["generators"] = e.generators;
  j["normalizer"] = Json{{"symbol", e.normalizer.symbol},
                         {"continuous", e.normalizer.continuous},
                         {"generators", e.normalizer.generators}};
  return j;
}

Json minimize_report_to_json(const MinimizeReport& r) {
  Json j;
  auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
  j["final_action"] = num(r.final_action);
  j["grad_norm"] = num(r.grad_norm);
  j["min_mutual_distance"] = num(r.min_mutual_distance);
  j["iterations"] = r.iterations;
  j["modes"] = r.modes;
  j["collisionless"] = r.collisionless;
  j["converged"] = r.converged;
  j["ode_residual"] = r.ode_residual ? num(*r.ode_residual) : Json(nullptr);
  j["restarts"] = r.restarts;
  j["seed"] = r.seed_used;
  j["warning"] = r.warning ? Json(*r.warning) : Json(nullptr);
  return j;
}

std::string trajectory_to_json(const FourierLoop& loop, const TrajectoryMeta& meta, int samples) {
  std::string s;
  s += "{\"n\":" + std::to_string(loop.n);
  s += ",\"period\":" + fmt17(loop.period);
  s += ",\"modes\":" + std::to_string(loop.modes);
  s += ",\"coeffs\":[";
  for (int i = 0; i < loop.n; ++i) {
    s += i ? ",[" : "[";
    for (int k = 0; k <= loop.modes; ++k) {
      s += k ? ",[" : "[";
      const CVec3& c = loop.coeffs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      for (std::size_t a = 0; a < 3; ++a)
        s += (a ? ",[" : "[") + fmt17(c[a].real()) + "," + fmt17(c[a].imag()) + "]";
      s += "]";
    }
    s += "]";
  }
  s += "]";
  if (samples > 0) {
    s += ",\"samples\":[";
    const auto pts = sample_positions(loop, samples);
    for (std::size_t q = 0; q < pts.size(); ++q) {
      s += q ? ",[" : "[";
      for (std::size_t i = 0; i < pts[q].size(); ++i) {
        const Vec3& x = pts[q][i];
        s += (i ? ",[" : "[") + fmt17(x[0]) + "," + fmt17(x[1]) + "," + fmt17(x[2]) + "]";
      }
      s += "]";
    }
    s += "]";
  }
  s += ",\"metadata\":{\"masses\":[";
  for (std::size_t i = 0; i < meta.masses.size(); ++i) s += (i ? "," : "") + fmt17(meta.masses[i]);
  s += "],\"alpha\":" + fmt17(meta.alpha);
  s += ",\"omega\":[" + fmt17(meta.omega[0]) + "," + fmt17(meta.omega[1]) + "," + fmt17(meta.omega[2]) + "]";
  if (meta.view_axis)
    s += ",\"view_axis\":[" + fmt17((*meta.view_axis)[0]) + "," + fmt17((*meta.view_axis)[1]) + "," +
         fmt17((*meta.view_axis)[2]) + "]";
  s += ",\"normalization\":\"T = 1 unless stated, masses as given, gravitational constant 1\"}}\n";
  return s;
}

FourierLoop trajectory_from_json(const Json& j, TrajectoryMeta* meta) {
  const int n = static_cast<int>(get_int(need(j, "n"), "n"));
  const int modes = static_cast<int>(get_int(need(j, "modes"), "modes"));
  const double period = get_number(need(j, "period"), "period");
  FourierLoop loop = FourierLoop::zero(n, modes, period);
  const Json& cj = need(j, "coeffs");
  if (!cj.is_array() || static_cast<int>(cj.size()) != n) bad("coeffs must list one entry per body");
  for (int i = 0; i < n; ++i) {
    const Json& bj = cj[static_cast<std::size_t>(i)];
    if (!bj.is_array() || static_cast<int>(bj.size()) != modes + 1) bad("each body needs modes + 1 coefficient triples");
    for (int k = 0; k <= modes; ++k) {
      const Json& kj = bj[static_cast<std::size_t>(k)];
      if (!kj.is_array() || kj.size() != 3) bad("coefficients come in triples");
      for (std::size_t a = 0; a < 3; ++a) {
        const Json& z = kj[a];
        if (!z.is_array() || z.size() != 2) bad("complex numbers are [re, im] pairs");
        const double re = get_number(z[0], "coefficient"), im = get_number(z[1], "coefficient");
        loop.coeffs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)][a] = Complex(re, k == 0 ? 0.0 : im);
      }
    }
  }
  if (meta) {
    *meta = TrajectoryMeta{};
    meta->masses.assign(static_cast<std::size_t>(n), 1.0);
    if (j.contains("metadata")) {
      const Json& mj = j.at("metadata");
      if (mj.contains("masses")) meta->masses = masses_from_json(mj.at("masses"), n);
      if (mj.contains("alpha")) meta->alpha = get_number(mj.at("alpha"), "alpha");
      if (mj.contains("omega")) meta->omega = vec_from_json(mj.at("omega"));
      if (mj.contains("view_axis")) meta->view_axis = vec_from_json(mj.at("view_axis"));
    }
  }
  return loop;
}

}  // namespace equiorbit
