#include "pointgroups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "error.hpp"

namespace equiorbit {

namespace {

constexpr double kPi = std::numbers::pi;
const double kPhi = (std::sqrt(5.0) + 1.0) / 2.0;

// Sorted values that matrix entries are snapped to.
const std::vector<double>& snap_values() {
  static const std::vector<double> values = [] {
    std::vector<double> v{0.0, 0.5, 1.0, kPhi / 2, (kPhi - 1) / 2};
    for (int p = 1; p <= 24; ++p)
      for (int k = 0; k < p; ++k) {
        v.push_back(std::cos(2 * kPi * k / p));
        v.push_back(std::sin(2 * kPi * k / p));
      }
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) v.push_back(-v[i]);
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
      if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
    // exact representatives for the values that have them
    for (double& x : out)
      for (double e : {-1.0, -0.5, 0.0, 0.5, 1.0})
        if (std::fabs(x - e) < 1e-12) x = e;
    return out;
  }();
  return values;
}

double snap_entry(double x) {
  const auto& v = snap_values();
  auto it = std::lower_bound(v.begin(), v.end(), x);
  double best = x, dist = kTolMat;
  if (it != v.end() && std::fabs(*it - x) <= dist) {
    best = *it;
    dist = std::fabs(*it - x);
  }
  if (it != v.begin() && std::fabs(*(it - 1) - x) <= dist) best = *(it - 1);
  return best;
}

const char* kFamilyNames[] = {"trivial", "C",     "D",     "T",     "O",  "Y",
                              "I",       "IxC",   "IxD",   "IxT",   "IxO", "IxY",
                              "C2pCp",   "DpCp",  "D2pDp", "OT",    "Pprime", "Cph",
                              "unknown"};

std::string zeta_name(int p) { return "zeta_" + std::to_string(p); }

std::vector<double> sorted_signature(const MatrixGroup& g) {
  std::vector<double> sig;
  sig.reserve(g.order());
  for (const Mat3& m : g.elements()) sig.push_back(m.det() * 10.0 + m.trace());
  std::sort(sig.begin(), sig.end());
  return sig;
}

int count_half_turns(std::span<const Mat3> rot) {
  int n = 0;
  for (const Mat3& m : rot)
    if (std::fabs(m.trace() + 1.0) < 1e-6) ++n;
  return n;
}

Label recognize_rotation(std::span<const Mat3> rot) {
  const int n = static_cast<int>(rot.size());
  const int half = count_half_turns(rot);
  if (n == 1) return {Family::Trivial, 0};
  if (n == 12 && half == 3) return {Family::T, 0};
  if (n == 24 && half == 9) return {Family::O, 0};
  if (n == 60 && half == 15) return {Family::Y, 0};
  if (half <= 1) return {Family::C, n};
  if (n % 2 == 0) return {Family::D, n / 2};
  return {Family::Unknown, 0};
}

}  // namespace

bool has_parameter(Family f) {
  switch (f) {
    case Family::C: case Family::D: case Family::IxC: case Family::IxD:
    case Family::C2pCp: case Family::DpCp: case Family::D2pDp:
    case Family::Pprime: case Family::Cph:
      return true;
    default:
      return false;
  }
}

std::string family_name(Family f) { return kFamilyNames[static_cast<int>(f)]; }

Family parse_family(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(Family::Cph); ++i)
    if (name == kFamilyNames[i]) return static_cast<Family>(i);
  fail(ErrorCode::kInvalidParameter, "unknown group name '" + name + "'");
}

Label make_label(Family f, int p) {
  if (f == Family::Unknown) fail(ErrorCode::kInvalidParameter, "unknown group family");
  if (has_parameter(f)) {
    if (p < 1) fail(ErrorCode::kInvalidParameter, family_name(f) + " needs a parameter p >= 1");
    return {f, p};
  }
  return {f, 0};
}

std::string to_string(const Label& l) {
  if (has_parameter(l.family)) return family_name(l.family) + "(" + std::to_string(l.p) + ")";
  return family_name(l.family);
}

std::string symbol(const Label& l) {
  const std::string p = std::to_string(l.p), p2 = std::to_string(2 * l.p);
  switch (l.family) {
    case Family::Trivial: return "1";
    case Family::C: return "C" + p;
    case Family::D: return "D" + p;
    case Family::T: return "T";
    case Family::O: return "O";
    case Family::Y: return "Y";
    case Family::I: return "I";
    case Family::IxC: return "IxC" + p;
    case Family::IxD: return "IxD" + p;
    case Family::IxT: return "IxT";
    case Family::IxO: return "IxO";
    case Family::IxY: return "IxY";
    case Family::C2pCp: return "C" + p2 + "C" + p;
    case Family::DpCp: return "D" + p + "C" + p;
    case Family::D2pDp: return "D" + p2 + "D" + p;
    case Family::OT: return "OT";
    case Family::Pprime: return "P'" + p2;
    case Family::Cph: return "C" + p + "h";
    case Family::Unknown: break;
  }
  return "unknown";
}

Label canonical(const Label& in) {
  Label l = in;
  if (l.family == Family::Pprime) l.family = (l.p % 2 == 1) ? Family::IxC : Family::C2pCp;
  if (l.family == Family::Cph) l.family = (l.p % 2 == 0) ? Family::IxC : Family::C2pCp;
  if (l.family == Family::C && l.p == 1) return {Family::Trivial, 0};
  if (l.family == Family::IxC && l.p == 1) return {Family::I, 0};
  if (l.family == Family::D && l.p == 1) return {Family::C, 2};
  if (l.family == Family::IxD && l.p == 1) return {Family::IxC, 2};
  if (l.family == Family::DpCp && l.p == 1) return {Family::C2pCp, 1};
  if (l.family == Family::D2pDp && l.p == 1) return {Family::DpCp, 2};
  return l;
}

int catalog_order(const Label& l) {
  switch (l.family) {
    case Family::Trivial: return 1;
    case Family::C: return l.p;
    case Family::D: return 2 * l.p;
    case Family::T: return 12;
    case Family::O: return 24;
    case Family::Y: return 60;
    case Family::I: return 2;
    case Family::IxC: return 2 * l.p;
    case Family::IxD: return 4 * l.p;
    case Family::IxT: return 24;
    case Family::IxO: return 48;
    case Family::IxY: return 120;
    case Family::C2pCp: return 2 * l.p;
    case Family::DpCp: return 2 * l.p;
    case Family::D2pDp: return 4 * l.p;
    case Family::OT: return 24;
    case Family::Pprime: return 2 * l.p;
    case Family::Cph: return 2 * l.p;
    case Family::Unknown: break;
  }
  fail(ErrorCode::kInvalidParameter, "unknown group");
}

Mat3 snap(const Mat3& m) {
  Mat3 s;
  for (std::size_t i = 0; i < 9; ++i) s.a[i] = snap_entry(m.a[i]);
  return s;
}

bool is_orthogonal(const Mat3& m, double tol) {
  const Mat3 p = m.transposed() * m;
  return max_abs_diff(p, Mat3::identity()) <= tol && std::fabs(std::fabs(m.det()) - 1.0) <= tol;
}

void require_orthogonal(const Mat3& m) {
  if (!is_orthogonal(m, 1e-8)) fail(ErrorCode::kInvalidParameter, "matrix is not orthogonal");
}

bool same_matrix(const Mat3& x, const Mat3& y, double tol) { return max_abs_diff(x, y) <= tol; }

bool lex_less(const Mat3& x, const Mat3& y) {
  for (std::size_t i = 0; i < 9; ++i) {
    if (x.a[i] < y.a[i] - 1e-9) return true;
    if (x.a[i] > y.a[i] + 1e-9) return false;
  }
  return false;
}

int matrix_order(const Mat3& m) {
  Mat3 p = m;
  for (int k = 1; k <= 720; ++k) {
    if (same_matrix(p, Mat3::identity(), 1e-7)) return k;
    p = snap(p * m);
  }
  return 0;
}

Mat3 rotation_zeta(int p) {
  if (p < 1) fail(ErrorCode::kInvalidParameter, "zeta_p needs p >= 1");
  const double c = std::cos(2 * kPi / p), s = std::sin(2 * kPi / p);
  return snap(Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}});
}

Mat3 kappa() { return Mat3::diag(1, -1, -1); }

Mat3 pi3() { return Mat3{{0, 1, 0, 0, 0, 1, 1, 0, 0}}; }

Mat3 pi3_prime() {
  return snap(Mat3{{kPhi / 2, (1 - kPhi) / 2, 0.5,
                    (kPhi - 1) / 2, -0.5, -kPhi / 2,
                    0.5, kPhi / 2, (1 - kPhi) / 2}});
}

MatrixGroup MatrixGroup::generate(std::span<const Mat3> gens, std::optional<Label> name) {
  MatrixGroup g;
  for (const Mat3& m : gens) require_orthogonal(m);
  std::vector<Mat3>& el = g.elems_;
  for (std::size_t head = 0; head < el.size(); ++head) {
    for (const Mat3& s : gens) {
      const Mat3 prod = snap(el[head] * s);
      if (!g.contains(prod, kTolMat * 100)) {
        el.push_back(prod);
        if (el.size() > kMaxOrder)
          fail(ErrorCode::kNotFinite, "closure exceeds " + std::to_string(kMaxOrder) + " elements");
      }
    }
  }
  g.name_ = name;
  return g;
}

MatrixGroup MatrixGroup::from_elements(std::vector<Mat3> elems, std::optional<Label> name) {
  MatrixGroup g;
  g.elems_.clear();
  for (const Mat3& m : elems) {
    require_orthogonal(m);
    if (!g.contains(m)) g.elems_.push_back(snap(m));
  }
  if (!g.contains(Mat3::identity())) fail(ErrorCode::kInvalidParameter, "set lacks the identity");
  for (const Mat3& a : g.elems_)
    for (const Mat3& b : g.elems_)
      if (!g.contains(a * b)) fail(ErrorCode::kInvalidParameter, "set is not closed under products");
  // identity first
  auto id = *g.index_of(Mat3::identity());
  std::swap(g.elems_[0], g.elems_[id]);
  g.name_ = name;
  return g;
}

MatrixGroup MatrixGroup::with_name(std::optional<Label> name) const {
  MatrixGroup g = *this;
  g.name_ = name;
  return g;
}

std::optional<std::size_t> MatrixGroup::index_of(const Mat3& m, double tol) const {
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (same_matrix(elems_[i], m, tol)) return i;
  return std::nullopt;
}

bool MatrixGroup::is_subgroup_of(const MatrixGroup& other) const {
  return std::all_of(elems_.begin(), elems_.end(), [&](const Mat3& m) { return other.contains(m); });
}

bool MatrixGroup::same_set(const MatrixGroup& other) const {
  return order() == other.order() && is_subgroup_of(other);
}

MatrixGroup MatrixGroup::conjugated(const Mat3& c) const {
  MatrixGroup g = *this;
  const Mat3 ct = c.transposed();
  for (Mat3& m : g.elems_) m = snap(c * m * ct);
  return g;
}

bool MatrixGroup::normalized_by(const Mat3& m) const {
  const Mat3 mt = m.transposed();
  return std::all_of(elems_.begin(), elems_.end(), [&](const Mat3& k) { return contains(m * k * mt); });
}

bool MatrixGroup::is_rotation_group() const {
  return std::all_of(elems_.begin(), elems_.end(), [](const Mat3& m) { return m.det() > 0; });
}

std::vector<Mat3> standard_generators(const Label& in) {
  const Mat3 minus = -Mat3::identity();
  Label l = in;
  if (l.family == Family::Pprime) l.family = (l.p % 2 == 1) ? Family::IxC : Family::C2pCp;
  if (l.family == Family::Cph) l.family = (l.p % 2 == 0) ? Family::IxC : Family::C2pCp;
  if (has_parameter(l.family) && l.p < 1)
    fail(ErrorCode::kInvalidParameter, family_name(l.family) + " needs p >= 1");
  const int p = l.p;
  switch (l.family) {
    case Family::Trivial: return {};
    case Family::C: return {rotation_zeta(p)};
    case Family::D: return {rotation_zeta(p), kappa()};
    case Family::T: return {rotation_zeta(2), pi3()};
    case Family::O: return {rotation_zeta(4), pi3()};
    case Family::Y: return {pi3(), pi3_prime()};
    case Family::I: return {minus};
    case Family::IxC: return {minus, rotation_zeta(p)};
    case Family::IxD: return {minus, rotation_zeta(p), kappa()};
    case Family::IxT: return {minus, rotation_zeta(2), pi3()};
    case Family::IxO: return {minus, rotation_zeta(4), pi3()};
    case Family::IxY: return {minus, pi3(), pi3_prime()};
    case Family::C2pCp: return {-rotation_zeta(2 * p)};
    case Family::DpCp: return {rotation_zeta(p), -kappa()};
    case Family::D2pDp: return {rotation_zeta(p), kappa(), -rotation_zeta(2 * p)};
    case Family::OT: return {rotation_zeta(2), pi3(), -rotation_zeta(4)};
    default: break;
  }
  fail(ErrorCode::kInvalidParameter, "unknown group family");
}

MatrixGroup generate_group(std::span<const Mat3> gens) { return MatrixGroup::generate(gens); }

MatrixGroup mixed_group(const MatrixGroup& g, const MatrixGroup& h) {
  if (!h.is_subgroup_of(g) || g.order() != 2 * h.order())
    fail(ErrorCode::kInvalidPair, "mixed group needs a subgroup of index 2");
  std::vector<Mat3> out = h.elements();
  for (const Mat3& m : g.elements())
    if (!h.contains(m)) out.push_back(-m);
  return MatrixGroup::from_elements(std::move(out));
}

MatrixGroup build_named(const Label& l) {
  if (l.family == Family::Unknown) fail(ErrorCode::kInvalidParameter, "unknown group name");
  const std::vector<Mat3> gens = standard_generators(l);
  MatrixGroup g = MatrixGroup::generate(gens, l);
  if (static_cast<int>(g.order()) != catalog_order(l))
    fail(ErrorCode::kNotFinite, "closure of " + to_string(l) + " has unexpected order");
  return g;
}

Label recognize(const MatrixGroup& g) {
  std::vector<Mat3> rot;
  for (const Mat3& m : g.elements())
    if (m.det() > 0) rot.push_back(m);

  Label guess{Family::Unknown, 0};
  const Label r = recognize_rotation(rot);
  if (g.contains_minus_identity()) {
    switch (r.family) {
      case Family::Trivial: guess = {Family::I, 0}; break;
      case Family::C: guess = {Family::IxC, r.p}; break;
      case Family::D: guess = {Family::IxD, r.p}; break;
      case Family::T: guess = {Family::IxT, 0}; break;
      case Family::O: guess = {Family::IxO, 0}; break;
      case Family::Y: guess = {Family::IxY, 0}; break;
      default: break;
    }
  } else if (rot.size() == g.order()) {
    guess = r;
  } else {
    std::vector<Mat3> lifted = rot;
    for (const Mat3& m : g.elements())
      if (m.det() < 0) lifted.push_back(-m);
    const Label big = recognize_rotation(lifted);
    if (big.family == Family::C && (r.family == Family::C || r.family == Family::Trivial))
      guess = {Family::C2pCp, big.p / 2};
    else if (big.family == Family::D && (r.family == Family::C || r.family == Family::Trivial) &&
             big.p >= 2)
      guess = {Family::DpCp, big.p};
    else if (big.family == Family::D && r.family == Family::D)
      guess = {Family::D2pDp, r.p};
    else if (big.family == Family::O && r.family == Family::T)
      guess = {Family::OT, 0};
  }
  if (guess.family == Family::Unknown) return guess;
  guess = canonical(guess);
  // confirm with the full (det, trace) multiset of the standard representative
  const auto a = sorted_signature(g), b = sorted_signature(build_named(guess));
  if (a.size() != b.size()) return {Family::Unknown, 0};
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > 1e-6) return {Family::Unknown, 0};
  return guess;
}

Normalizer normalizer_in_O3(const Label& in) {
  // the D_{2p}D_p row at p = 1 prints I x D_2 (a proper subgroup of the full normalizer)
  const bool d2d1_row = in.family == Family::D2pDp && in.p == 1;
  const Label l = d2d1_row ? in : canonical(in);
  auto finite = [](std::string sym, std::vector<std::string> gens, Label of) {
    Normalizer n;
    n.symbol = std::move(sym);
    n.generators = std::move(gens);
    n.group = build_named(of);
    return n;
  };
  auto continuous = [](std::string sym, std::vector<std::string> gens) {
    Normalizer n;
    n.continuous = true;
    n.symbol = std::move(sym);
    n.generators = std::move(gens);
    return n;
  };
  const int p = l.p;
  switch (l.family) {
    case Family::Trivial: return continuous("O(3)", {});
    case Family::C: return continuous("O(2)", {"zeta_*", "kappa"});
    case Family::D:
      if (p == 2) return finite("O", {"zeta_4", "pi_3"}, {Family::O, 0});
      return finite("D" + std::to_string(2 * p), {zeta_name(2 * p)}, {Family::D, 2 * p});
    case Family::T: return finite("O", {"zeta_4"}, {Family::O, 0});
    case Family::O: return finite("O", {}, {Family::O, 0});
    case Family::Y: return finite("Y", {}, {Family::Y, 0});
    case Family::I: return continuous("O(3)", {});
    case Family::IxC: return continuous("IxO(2)", {"zeta_*", "kappa"});
    case Family::IxD:
      if (p == 2) return finite("IxO", {"zeta_4", "pi_3"}, {Family::IxO, 0});
      return finite("IxD" + std::to_string(2 * p), {zeta_name(2 * p)}, {Family::IxD, 2 * p});
    case Family::IxT: return finite("IxO", {"zeta_4"}, {Family::IxO, 0});
    case Family::IxO: return finite("IxO", {}, {Family::IxO, 0});
    case Family::IxY: return finite("IxY", {}, {Family::IxY, 0});
    case Family::C2pCp: return continuous("IxO(2)", {"zeta_*", "-1"});
    case Family::DpCp:
      return finite("IxD" + std::to_string(2 * p), {"-1"}, {Family::IxD, 2 * p});
    case Family::D2pDp:
      return finite("IxD" + std::to_string(2 * p), {"-1"}, {Family::IxD, 2 * p});
    case Family::OT: return finite("IxO", {"-1"}, {Family::IxO, 0});
    default: break;
  }
  fail(ErrorCode::kInvalidParameter, "unknown group name");
}

CatalogEntry catalog_entry(const Label& l) {
  CatalogEntry e;
  e.label = l;
  e.symbol = symbol(l);
  e.order = catalog_order(l);
  const int p = l.p;
  const Label c = (l.family == Family::Pprime || l.family == Family::Cph) ? canonical(l) : l;
  switch (c.family) {
    case Family::Trivial: break;
    case Family::C: e.generators = {zeta_name(c.p)}; break;
    case Family::D: e.generators = {zeta_name(p), "kappa"}; break;
    case Family::T: e.generators = {"zeta_2", "pi_3"}; break;
    case Family::O: e.generators = {"zeta_4", "pi_3"}; break;
    case Family::Y: e.generators = {"pi_3", "pi_3'"}; break;
    case Family::I: e.generators = {"-1"}; break;
    case Family::IxC: e.generators = {"-1", zeta_name(c.p)}; break;
    case Family::IxD: e.generators = {"-1", zeta_name(p), "kappa"}; break;
    case Family::IxT: e.generators = {"-1", "zeta_2", "pi_3"}; break;
    case Family::IxO: e.generators = {"-1", "zeta_4", "pi_3"}; break;
    case Family::IxY: e.generators = {"-1", "pi_3", "pi_3'"}; break;
    case Family::C2pCp: e.generators = {"-" + zeta_name(2 * c.p)}; break;
    case Family::DpCp: e.generators = {zeta_name(p), "-kappa"}; break;
    case Family::D2pDp: e.generators = {zeta_name(p), "kappa", "-" + zeta_name(2 * p)}; break;
    case Family::OT: e.generators = {"zeta_2", "pi_3", "-zeta_4"}; break;
    default: fail(ErrorCode::kInvalidParameter, "unknown group name");
  }
  e.normalizer = normalizer_in_O3(l);
  return e;
}

std::vector<Family> catalog_families() {
  return {Family::C,   Family::D,   Family::T,   Family::O,     Family::Y,    Family::I,
          Family::IxC, Family::IxD, Family::IxT, Family::IxO,   Family::IxY,  Family::C2pCp,
          Family::DpCp, Family::D2pDp, Family::OT};
}

Vec3 rotation_axis(const Mat3& r) {
  Vec3 w{r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
  if (norm(w) > 1e-6) return normalized(w);
  // half turn: columns of (R + 1) span the axis
  const Mat3 s = r + Mat3::identity();
  Vec3 best{0, 0, 1};
  double bn = 0;
  for (int c = 0; c < 3; ++c) {
    Vec3 col{s(0, c), s(1, c), s(2, c)};
    if (norm(col) > bn) {
      bn = norm(col);
      best = col;
    }
  }
  if (bn < 1e-9) return {0, 0, 1};
  return normalized(best);
}

double rotation_angle(const Mat3& r) {
  return std::acos(std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0));
}

}  // namespace equiorbit
