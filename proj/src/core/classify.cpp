#include "classify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"

namespace equiorbit {

namespace {

bool is_plane_reflection(const Mat3& m) {
  return m.det() < 0 && std::fabs(m.trace() - 1.0) < 1e-7;
}

bool all_sigma_trivial(const SymmetryGroup& g) {
  const Permutation id = identity_permutation(g.n());
  return std::all_of(g.elements().begin(), g.elements().end(), [&](const auto& e) { return e.sigma == id; });
}

bool orientation_preserving(const SymmetryGroup& g) {
  return std::all_of(g.elements().begin(), g.elements().end(), [](const auto& e) { return e.rho.det() > 0; });
}

std::vector<Vec3> det_twisted_fixed_space(std::span<const Mat3> mats) {
  std::vector<Mat3> tw;
  for (const Mat3& m : mats) tw.push_back((m.det() > 0 ? 1.0 : -1.0) * m);
  return fixed_space(tw);
}

std::vector<Mat3> rhos(const SymmetryGroup& g) {
  std::vector<Mat3> out;
  for (const auto& e : g.elements()) out.push_back(e.rho);
  return out;
}

// Normal of the plane spanned by a 2-dimensional basis.
Vec3 normal_of(const std::vector<Vec3>& plane) { return normalized(cross(plane[0], plane[1])); }

bool in_space(const Vec3& v, const std::vector<Vec3>& basis) {
  Vec3 rest = v;
  for (const Vec3& b : basis) rest -= dot(v, b) * b;
  return norm(rest) < 1e-7;
}

// Theorem A image list, by canonical label.
bool in_exclusion_list(const Label& l) {
  switch (l.family) {
    case Family::Trivial: case Family::I: case Family::C: case Family::D: case Family::T:
    case Family::O: case Family::Y: case Family::IxC: case Family::C2pCp:
      return true;
    default:
      return false;
  }
}

}  // namespace

AxesResult rotation_axes(const SymmetryGroup& g) {
  AxesResult out;
  out.basis = twisted_fixed_space(g);
  static const char* kinds[] = {"none", "axis", "plane", "all"};
  out.kind = kinds[out.basis.size()];
  if (out.basis.size() == 3) out.basis = {{0, 0, 1}};
  return out;
}

bool is_type_R(const SymmetryGroup& g) { return !twisted_fixed_space(g).empty(); }

std::vector<Vec3> angular_momentum_fixed_space(const SymmetryGroup& g) { return twisted_fixed_space(g); }

std::string to_string(KernelCase c) {
  switch (c) {
    case KernelCase::Free: return "free";
    case KernelCase::PlaneReflection: return "plane-reflection";
    case KernelCase::Full: return "full";
    case KernelCase::Degenerate: return "degenerate";
  }
  return "unknown";
}

KernelCaseResult kernel_case(const SymmetryGroup& g, std::span<const int> component) {
  if (component.empty()) fail(ErrorCode::kInvalidParameter, "empty component");
  KernelCaseResult out;
  const SymmetryGroup k = core(g);
  const MatrixGroup kimg = k.space_image();
  out.core_label = canonical(recognize(kimg));
  if (k.order() == 1) {
    out.E = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    return out;
  }
  if (k.order() == 2 && is_plane_reflection(k.elements()[1].rho))
    fail(ErrorCode::kPlanarDegenerate, "the core is a single plane reflection");

  const int i0 = *std::min_element(component.begin(), component.end());
  std::vector<Mat3> kh;
  for (const auto& e : k.elements())
    if (e.sigma[static_cast<std::size_t>(i0)] == i0) kh.push_back(e.rho);
  out.E = fixed_space(kh);
  if (kh.size() == 1) return out;
  if (kh.size() == k.order()) {
    out.tag = KernelCase::Full;
    return out;
  }
  if (kh.size() == 2 && is_plane_reflection(kh[1])) {
    out.tag = KernelCase::PlaneReflection;
    const Vec3 n = normal_of(out.E);
    const bool invariant = std::all_of(kimg.elements().begin(), kimg.elements().end(), [&](const Mat3& m) {
      return std::fabs(std::fabs(dot(m * n, n)) - 1) < 1e-7;
    });
    std::string fam = "other";
    if (invariant) {
      switch (out.core_label->family) {
        case Family::IxC: case Family::C2pCp: fam = "Cph"; break;
        case Family::IxD: fam = "IxDp"; break;
        case Family::DpCp: fam = "DpCp"; break;
        case Family::D2pDp: fam = "D2pDp"; break;
        default: break;
      }
    }
    out.reflection_family = fam;
    out.collision_evidence = fam != "Cph";
    return out;
  }
  // fixed space of dimension 0 or 1: bound to collisions or fully uncoercive
  out.tag = KernelCase::Degenerate;
  out.collision_evidence = true;
  return out;
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::TrivialAction: return "TrivialAction";
    case VerdictStatus::RotatingCircle: return "RotatingCircle";
    case VerdictStatus::SphereAveraging: return "SphereAveraging";
    case VerdictStatus::NoVariationFound: return "NoVariationFound";
  }
  return "unknown";
}

Verdict vvariation_verdict(const SymmetryGroup& gs) {
  Verdict v;
  v.isotropy_label = canonical(recognize(gs.space_image()));
  if (all_sigma_trivial(gs)) {
    v.status = VerdictStatus::TrivialAction;
    return v;
  }
  const auto all = rhos(gs);
  const auto wdet = det_twisted_fixed_space(all);
  const auto comps = transitive_components(gs);

  if (!wdet.empty()) {
    for (const auto& c : comps) {
      if (c.size() < 2) continue;
      const int i = c.front();
      const auto fix = fixed_space(rhos(body_stabilizer(gs, i)));
      std::optional<Vec3> n;
      if (fix.size() == 3) n = wdet.front();
      else if (fix.size() == 2 && in_space(normal_of(fix), wdet)) n = normal_of(fix);
      if (n) {
        v.status = VerdictStatus::RotatingCircle;
        v.witness = Witness{i, false, *n, 1.0};
        return v;
      }
    }
  }
  if (orientation_preserving(gs)) {
    for (const auto& c : comps) {
      if (c.size() < 2) continue;
      if (body_stabilizer(gs, c.front()).order() == 1) {
        v.status = VerdictStatus::SphereAveraging;
        v.witness = Witness{c.front(), true, {0, 0, 1}, 1.0};
        return v;
      }
    }
  }
  v.status = VerdictStatus::NoVariationFound;
  return v;
}

TheoremACheck theorem_A_check(const SymmetryGroup& g) {
  TheoremACheck out;
  out.pass = true;
  for (auto& mi : maximal_isotropies(g)) {
    IsotropyCheck ic;
    ic.time = mi.time;
    ic.label = canonical(recognize(mi.group.space_image()));
    ic.verdict = vvariation_verdict(mi.group);
    if (all_sigma_trivial(mi.group)) {
      ic.excluded = true;
      ic.reason = "trivial permutation action";
    } else {
      // every invariant cluster must contain a free component or be fixed pointwise
      bool all_free = true;
      for (const auto& c : transitive_components(mi.group))
        if (c.size() > 1 && body_stabilizer(mi.group, c.front()).order() != 1) all_free = false;
      const bool listed = in_exclusion_list(ic.label);
      ic.excluded = all_free && listed;
      if (ic.excluded) ic.reason = "free transitive components with image " + symbol(ic.label);
      else if (!listed) ic.reason = "image " + symbol(ic.label) + " is not in the exclusion list";
      else ic.reason = "a transitive component has non-trivial permutation isotropy";
    }
    out.pass = out.pass && ic.excluded;
    out.isotropies.push_back(std::move(ic));
  }
  return out;
}

bool admissible_core(const Label& in) {
  const Label l = canonical(in);
  if (l.family == Family::Unknown) fail(ErrorCode::kInvalidParameter, "unrecognized core");
  const MatrixGroup K = build_named(l);
  // a single plane reflection makes the problem planar
  if (K.order() == 2 && is_plane_reflection(K.elements()[1])) return false;
  if (K.is_rotation_group()) return true;  // sphere averaging
  return !det_twisted_fixed_space(K.elements()).empty();  // rotating circle
}

bool admissible_core(const MatrixGroup& K) { return admissible_core(recognize(K)); }

bool admissible_core_eliminated(const Label& in) {
  if (!admissible_core(in)) return false;
  const MatrixGroup K = build_named(canonical(in));
  return std::none_of(K.elements().begin(), K.elements().end(), is_plane_reflection);
}

namespace {

// Index-2 subgroups of g: kernels of the non-zero functionals on g / <squares>.
std::vector<MatrixGroup> index_two_subgroups(const MatrixGroup& g) {
  std::vector<Mat3> sq;
  for (const Mat3& m : g.elements()) sq.push_back(snap(m * m));
  const MatrixGroup s = MatrixGroup::generate(sq);
  std::vector<Mat3> basis;
  MatrixGroup span = s;
  for (const Mat3& m : g.elements()) {
    if (span.contains(m)) continue;
    basis.push_back(m);
    std::vector<Mat3> gens = sq;
    gens.insert(gens.end(), basis.begin(), basis.end());
    span = MatrixGroup::generate(gens);
  }
  const int d = static_cast<int>(basis.size());
  // coordinates of each element in F_2^d
  std::vector<int> coord(g.order(), -1);
  for (int mask = 0; mask < (1 << d); ++mask) {
    Mat3 rep = Mat3::identity();
    for (int b = 0; b < d; ++b)
      if (mask & (1 << b)) rep = snap(rep * basis[static_cast<std::size_t>(b)]);
    for (const Mat3& x : s.elements()) {
      const auto idx = g.index_of(snap(rep * x));
      if (idx) coord[*idx] = mask;
    }
  }
  std::vector<MatrixGroup> out;
  for (int f = 1; f < (1 << d); ++f) {
    std::vector<Mat3> h;
    for (std::size_t i = 0; i < g.order(); ++i)
      if (__builtin_popcount(static_cast<unsigned>(coord[i] & f)) % 2 == 0) h.push_back(g.elements()[i]);
    out.push_back(MatrixGroup::from_elements(std::move(h)));
  }
  return out;
}

}  // namespace

std::vector<Label> admissible_extensions(const Label& in) {
  const Label k = canonical(in);
  if (!admissible_core_eliminated(k))
    fail(ErrorCode::kInvalidParameter, symbol(k) + " is not an admissible core");
  const int target = 2 * catalog_order(k);
  std::vector<Label> out;
  for (Family f : catalog_families()) {
    const int pmax = has_parameter(f) ? target : 0;
    for (int p = has_parameter(f) ? 1 : 0; p <= pmax; ++p) {
      const Label cand = canonical(make_label(f, p));
      if (catalog_order(cand) != target) continue;
      if (std::find(out.begin(), out.end(), cand) != out.end()) continue;
      const MatrixGroup g = build_named(cand);
      // extensions stay orientation-preserving or keep a rotating circle
      if (!g.is_rotation_group() && det_twisted_fixed_space(g.elements()).empty()) continue;
      bool contains_k = false;
      for (const auto& h : index_two_subgroups(g))
        if (canonical(recognize(h)) == k) contains_k = true;
      if (contains_k) out.push_back(cand);
    }
  }
  return out;
}

std::string to_string(Coercivity c) {
  switch (c) {
    case Coercivity::Coercive: return "coercive";
    case Coercivity::Undetermined: return "undetermined";
    case Coercivity::UncoerciveEvidence: return "uncoercive-evidence";
  }
  return "unknown";
}

int fixed_constant_dimension(const SymmetryGroup& g, const Vec3& omega) {
  const bool frame = norm(omega) > 0;
  if (frame) {
    const Vec3 w = normalized(omega);
    for (const auto& e : g.elements()) {
      const double s = e.tau.det() * (e.rho.det() > 0 ? 1.0 : -1.0);
      if (norm(s * (e.rho * w) - w) > 1e-7)
        fail(ErrorCode::kInvalidFrame, "omega is not along a rotation axis of the group");
    }
  }
  Mat3 pw = Mat3::identity();
  if (frame) {
    const Vec3 w = normalized(omega);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) pw(a, b) = w[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(b)];
  }
  double tr = 0;
  for (const auto& e : g.elements()) {
    int fixed_bodies = 0;
    for (int i = 0; i < g.n(); ++i)
      if (e.sigma[static_cast<std::size_t>(i)] == i) ++fixed_bodies;
    tr += fixed_bodies * (e.rho * pw).trace();
  }
  return static_cast<int>(std::lround(tr / static_cast<double>(g.order())));
}

Coercivity coercivity_status(const SymmetryGroup& g, const Vec3& omega) {
  return fixed_constant_dimension(g, omega) == 0 ? Coercivity::Coercive : Coercivity::Undetermined;
}

GroupReport check_group(const SymmetryGroup& g, const Vec3& omega) {
  GroupReport r;
  r.axes = rotation_axes(g);
  r.coercivity = coercivity_status(g, omega);
  try {
    for (const auto& c : transitive_components(g)) {
      r.kernel_cases.push_back(kernel_case(g, c));
      const auto& kc = r.kernel_cases.back();
      if (kc.collision_evidence && !r.collision_evidence)
        r.collision_evidence = to_string(kc.tag) + (kc.reflection_family.empty() ? "" : ":" + kc.reflection_family);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPlanarDegenerate) throw;
    r.collision_evidence = "planar-degenerate";
  }
  r.theorem_A = theorem_A_check(g);
  return r;
}

}  // namespace equiorbit
