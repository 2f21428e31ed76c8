#include "krh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "error.hpp"

namespace equiorbit {

namespace {

constexpr double kMatchTol = 1e-7;

Mat3 proper(const Mat3& m) { return m.det() > 0 ? m : -m; }

Mat3 power(const Mat3& m, std::int64_t e) {
  Mat3 out = Mat3::identity();
  for (std::int64_t i = 0; i < e; ++i) out = snap(out * m);
  return out;
}

bool commutes_with_all(const Mat3& m, const MatrixGroup& g) {
  for (const Mat3& x : g.elements())
    if (!same_matrix(m * x, x * m, kMatchTol)) return false;
  return true;
}

MatrixGroup proper_part(const MatrixGroup& g) {
  std::vector<Mat3> el;
  for (const Mat3& m : g.elements()) {
    const Mat3 p = snap(proper(m));
    if (std::none_of(el.begin(), el.end(), [&](const Mat3& x) { return same_matrix(x, p, kMatchTol); }))
      el.push_back(p);
  }
  return MatrixGroup::from_elements(std::move(el));
}

}  // namespace

std::vector<Mat3> small_generating_set(const MatrixGroup& g) {
  std::vector<Mat3> sorted = g.elements();
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Mat3& a, const Mat3& b) { return matrix_order(a) > matrix_order(b); });
  std::vector<Mat3> gens;
  MatrixGroup span;
  for (const Mat3& m : sorted) {
    if (span.order() == g.order()) break;
    if (span.contains(m, kMatchTol)) continue;
    gens.push_back(m);
    span = MatrixGroup::generate(gens);
  }
  return gens;
}

namespace {

// Rotation taking the orthonormal frame built from (u1, u2) to the one built from (v1, v2).
Mat3 frame_map(const Vec3& u1, const Vec3& u2, const Vec3& v1, const Vec3& v2) {
  auto frame = [](const Vec3& a, const Vec3& b) {
    const Vec3 e1 = normalized(a);
    Vec3 t = b - dot(b, e1) * e1;
    if (norm(t) < 1e-9) t = any_orthogonal(e1);
    const Vec3 e2 = normalized(t);
    const Vec3 e3 = cross(e1, e2);
    return Mat3{{e1[0], e2[0], e3[0], e1[1], e2[1], e3[1], e1[2], e2[2], e3[2]}};
  };
  return frame(v1, v2) * frame(u1, u2).transposed();
}

Mat3 conj(const Mat3& c, const Mat3& m) { return c * m * c.transposed(); }

bool is_continuous_normalizer(const Label& l) {
  switch (l.family) {
    case Family::Trivial: case Family::C: case Family::I: case Family::IxC: case Family::C2pCp:
      return true;
    default:
      return false;
  }
}

// Distance of m from the subgroup q (entrywise max norm).
double distance_to(const Mat3& m, const MatrixGroup& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const Mat3& x : q.elements()) best = std::min(best, max_abs_diff(m, x));
  return best;
}

double mismatch(const Mat3& c, const KrhData& a, const KrhData& b) {
  double d = distance_to(a.r.transposed() * conj(c, b.r), a.K);
  if (a.h) d = std::max(d, distance_to(a.h->transposed() * conj(c, *b.h), a.K));
  return d;
}

bool conjugates(const Mat3& c, const KrhData& a, const KrhData& b) {
  if (mismatch(c, a, b) > kMatchTol) return false;
  return b.K.conjugated(c).same_set(a.K);
}

// Conjugator for cores inside {1, -1}: align the axes of r and h.
std::optional<Mat3> align_small_core(const KrhData& a, const KrhData& b) {
  auto axes = [](const KrhData& d) {
    std::vector<Vec3> out;
    std::vector<Mat3> items{d.r};
    if (d.h) items.push_back(*d.h);
    for (const Mat3& m : items) {
      const Mat3 p = proper(m);
      if (rotation_angle(p) > 1e-9) out.push_back(rotation_axis(p));
    }
    return out;
  };
  const auto ua = axes(a), ub = axes(b);
  if (ua.size() != ub.size()) return std::nullopt;
  std::vector<Mat3> tries;
  if (ua.empty()) {
    tries.push_back(Mat3::identity());
  } else {
    const Vec3 ub2 = ub.size() > 1 ? ub[1] : any_orthogonal(ub[0]);
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) {
        const Vec3 ua2 = ua.size() > 1 ? ua[1] : any_orthogonal(ua[0]);
        tries.push_back(frame_map(ub[0], ub2, s1 * ua[0], s2 * ua2));
        // a second axis parallel to the first carries no frame information
        if (ua.size() > 1 && std::fabs(std::fabs(dot(ua[0], ua[1])) - 1) < 1e-9)
          tries.push_back(frame_map(ub[0], any_orthogonal(ub[0]), s1 * ua[0], s2 * any_orthogonal(ua[0])));
      }
  }
  for (const Mat3& c : tries)
    for (const Mat3& cc : {c, Mat3(-c)})
      if (conjugates(cc, a, b)) return cc;
  return std::nullopt;
}

}  // namespace

int order_mod(const Mat3& m, const MatrixGroup& q) {
  Mat3 p = m;
  for (int j = 1; j <= static_cast<int>(kMaxOrder); ++j) {
    if (q.contains(p, kMatchTol)) return j;
    p = snap(p * m);
  }
  fail(ErrorCode::kNotFinite, "matrix has infinite order modulo the subgroup");
}

Mat3 canonical_coset_rep(const Mat3& m, const MatrixGroup& q, const MatrixGroup& ref) {
  std::optional<Mat3> best;
  int best_rank = 0, best_order = 0;
  for (const Mat3& x : q.elements()) {
    const Mat3 c = snap(m * x);
    const int rank = commutes_with_all(c, ref) ? 0 : 1;
    const int ord = matrix_order(c);
    if (!best || rank < best_rank || (rank == best_rank && ord < best_order) ||
        (rank == best_rank && ord == best_order && lex_less(c, *best))) {
      best = c;
      best_rank = rank;
      best_order = ord;
    }
  }
  return *best;
}

std::optional<Mat3> standard_frame(const MatrixGroup& K) {
  const Label l = canonical(recognize(K));
  if (l.family == Family::Unknown) return std::nullopt;
  const MatrixGroup S = build_named(l);
  if (S.same_set(K)) return Mat3::identity();
  const MatrixGroup ps = proper_part(S), pk = proper_part(K);
  if (ps.order() != pk.order()) return std::nullopt;

  std::vector<Mat3> starts;
  const auto gens = small_generating_set(ps);
  if (gens.empty()) {
    starts.push_back(Mat3::identity());
  } else {
    const Mat3& g1 = gens[0];
    const Vec3 u1 = rotation_axis(g1);
    const double th1 = rotation_angle(g1);
    for (const Mat3& a : pk.elements()) {
      if (std::fabs(rotation_angle(a) - th1) > 1e-7) continue;
      const Vec3 v1 = rotation_axis(a);
      if (gens.size() == 1) {
        for (double s : {1.0, -1.0}) {
          const Mat3 c = frame_map(u1, any_orthogonal(u1), s * v1, any_orthogonal(s * v1));
          if (same_matrix(conj(c, g1), a, kMatchTol)) starts.push_back(c);
        }
        continue;
      }
      const Mat3& g2 = gens[1];
      const Vec3 u2 = rotation_axis(g2);
      const double th2 = rotation_angle(g2);
      for (const Mat3& b : pk.elements()) {
        if (std::fabs(rotation_angle(b) - th2) > 1e-7) continue;
        const Vec3 v2 = rotation_axis(b);
        for (double s1 : {1.0, -1.0})
          for (double s2 : {1.0, -1.0}) {
            if (std::fabs(dot(u1, u2) - s1 * s2 * dot(v1, v2)) > 1e-7) continue;
            const Mat3 c = frame_map(u1, u2, s1 * v1, s2 * v2);
            if (same_matrix(conj(c, g1), a, kMatchTol) && same_matrix(conj(c, g2), b, kMatchTol))
              starts.push_back(c);
          }
      }
      if (!starts.empty()) break;
    }
  }

  // The sign pattern of a mixed group may still need an element of N(P).
  std::vector<Mat3> adjust{Mat3::identity()};
  const Label pl = canonical(recognize(ps));
  if (!is_continuous_normalizer(pl)) {
    const Normalizer nz = normalizer_in_O3(pl);
    if (nz.group) adjust = nz.group->elements();
  } else if (pl.family == Family::C) {
    for (int j = 1; j < 2 * pl.p; ++j) adjust.push_back(axis_rotation({0, 0, 1}, std::numbers::pi * j / (2 * pl.p)));
  }
  for (const Mat3& c : starts)
    for (const Mat3& n : adjust) {
      const Mat3 cn = c * n;
      if (S.conjugated(cn).same_set(K)) return cn;
    }
  return std::nullopt;
}

std::optional<Mat3> find_conjugator(const KrhData& a, const KrhData& b) {
  if (a.h.has_value() != b.h.has_value()) return std::nullopt;
  if (a.K.order() != b.K.order()) return std::nullopt;
  const Label la = canonical(recognize(a.K)), lb = canonical(recognize(b.K));
  if (!(la == lb) || la.family == Family::Unknown) return std::nullopt;
  if (la.family == Family::Trivial || la.family == Family::I) return align_small_core(a, b);

  const auto ca = standard_frame(a.K), cb = standard_frame(b.K);
  if (!ca || !cb) return std::nullopt;
  const Mat3 c0 = *ca * cb->transposed();

  if (!is_continuous_normalizer(la)) {
    const Normalizer nz = normalizer_in_O3(la);
    for (const Mat3& n : nz.group->elements())
      for (double s : {1.0, -1.0}) {
        const Mat3 c = (s * conj(*ca, n)) * c0;
        if (conjugates(c, a, b)) return c;
      }
    return std::nullopt;
  }

  // continuous normalizer O(2) x {1,-1} about the principal axis
  const Vec3 z{0, 0, 1};
  for (const Mat3& flip : {Mat3::identity(), kappa()}) {
    auto at = [&](double phi) { return conj(*ca, axis_rotation(z, phi) * flip) * c0; };
    auto f = [&](double phi) { return mismatch(at(phi), a, b); };
    constexpr int kSamples = 1024;
    const double step = 2 * std::numbers::pi / kSamples;
    std::vector<std::pair<double, double>> scored;
    for (int i = 0; i < kSamples; ++i) scored.emplace_back(f(i * step), i * step);
    std::sort(scored.begin(), scored.end());
    for (std::size_t c = 0; c < std::min<std::size_t>(8, scored.size()); ++c) {
      double lo = scored[c].second - step, hi = scored[c].second + step;
      // golden-section refinement
      const double gr = (std::sqrt(5.0) - 1) / 2;
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      double f1 = f(x1), f2 = f(x2);
      while (hi - lo > 1e-10) {
        if (f1 < f2) {
          hi = x2; x2 = x1; f2 = f1;
          x1 = hi - gr * (hi - lo); f1 = f(x1);
        } else {
          lo = x1; x1 = x2; f1 = f2;
          x2 = lo + gr * (hi - lo); f2 = f(x2);
        }
      }
      const Mat3 cand = at((lo + hi) / 2);
      if (conjugates(cand, a, b)) return cand;
    }
  }
  return std::nullopt;
}

KrhData krh_data(const SymmetryGroup& g) {
  KrhData d;
  d.K = core(g).space_image();
  d.m = g.rotation_denominator();
  if (d.m > 1) {
    const Fraction step(1, d.m);
    for (const auto& e : g.elements())
      if (!e.tau.is_reflection() && e.tau.offset == step) {
        d.r = canonical_coset_rep(e.rho, d.K, d.K);
        break;
      }
  }
  const SymmetryElement* refl = nullptr;
  for (const auto& e : g.elements())
    if (e.tau.is_reflection() && (refl == nullptr || e.tau.offset < refl->tau.offset)) refl = &e;
  if (refl != nullptr) {
    d.h = canonical_coset_rep(refl->rho, d.K, d.K);
    d.time_origin = Fraction(refl->tau.offset.num(), 2 * refl->tau.offset.den());
  }
  return d;
}

HatKrhData hat_krh_data(const SymmetryGroup& g, std::span<const int> component) {
  if (component.empty()) fail(ErrorCode::kInvalidParameter, "empty component");
  const int i0 = *std::min_element(component.begin(), component.end());
  const SymmetryGroup h = body_stabilizer(g, i0);
  const KrhData krh = krh_data(g);
  const std::int64_t m = krh.m;

  HatKrhData d;
  d.mass = g.masses()[static_cast<std::size_t>(i0)];
  std::vector<Mat3> khat;
  for (const auto& e : h.elements())
    if (e.tau.is_identity()) khat.push_back(e.rho);
  d.Khat = MatrixGroup::from_elements(std::move(khat));

  const SymmetryElement* shift = nullptr;
  for (const auto& e : h.elements())
    if (!e.tau.is_reflection() && !e.tau.is_identity() && (shift == nullptr || e.tau.offset < shift->tau.offset))
      shift = &e;
  if (shift == nullptr) {
    d.k = m;
    d.rhat = Mat3::identity();
  } else {
    d.k = shift->tau.offset.num() * (m / shift->tau.offset.den());
    d.rhat = canonical_coset_rep(shift->rho, d.Khat, d.Khat);
  }

  const Fraction b0 = krh.h ? 2 * krh.time_origin : Fraction();
  const SymmetryElement* refl = nullptr;
  std::int64_t best_j = 0;
  for (const auto& e : h.elements()) {
    if (!e.tau.is_reflection()) continue;
    const Fraction rel = e.tau.offset - b0;
    const std::int64_t j = rel.num() * (m / rel.den());
    if (refl == nullptr || j < best_j) {
      refl = &e;
      best_j = j;
    }
  }
  if (refl != nullptr) {
    d.hhat = canonical_coset_rep(refl->rho, d.Khat, d.Khat);
    d.hhat_center = best_j;
  }
  return d;
}

Decomposition decompose(const SymmetryGroup& g) {
  Decomposition out;
  out.krh = krh_data(g);
  out.components = transitive_components(g);
  for (const auto& c : out.components) out.hats.push_back(hat_krh_data(g, c));
  return out;
}

namespace {

struct CoverElem {
  std::int64_t a = 0;
  int eps = 1;
  Mat3 m = Mat3::identity();
};

std::int64_t cover_length(const KrhData& krh, std::span<const HatKrhData> comps) {
  std::int64_t len = std::lcm(std::max<std::int64_t>(krh.m, 1), static_cast<std::int64_t>(order_mod(krh.r, krh.K)));
  for (const auto& c : comps) {
    if (c.k < 1) fail(ErrorCode::kInvalidData, "component shift k must be a positive integer");
    len = std::lcm(len, c.k * order_mod(c.rhat, c.Khat));
  }
  return len;
}

}  // namespace

SymmetryGroup group_from_data(const KrhData& krh, std::span<const HatKrhData> comps, double period) {
  const MatrixGroup& K = krh.K;
  const Mat3 r = snap(krh.r);
  require_orthogonal(r);
  if (!K.normalized_by(r)) fail(ErrorCode::kInvalidData, "r does not normalize K");
  if (krh.h) {
    const Mat3 h = snap(*krh.h);
    require_orthogonal(h);
    if (!K.normalized_by(h)) fail(ErrorCode::kInvalidData, "h does not normalize K");
    if (!K.contains(snap(h * h), kMatchTol)) fail(ErrorCode::kInvalidData, "h^2 is not in K");
    if (!K.contains(snap(r * h * r * h.transposed()), kMatchTol))
      fail(ErrorCode::kInvalidData, "h r h^-1 is not in r^-1 K");
  }
  const Mat3 h = krh.h ? snap(*krh.h) : Mat3::identity();
  const std::int64_t L = cover_length(krh, comps);

  for (const auto& c : comps) {
    if (!c.Khat.is_subgroup_of(K)) fail(ErrorCode::kInvalidData, "Khat is not contained in K");
    if (!K.contains(snap(power(r, c.k).transposed() * c.rhat), kMatchTol))
      fail(ErrorCode::kInvalidData, "rhat is not in the coset r^k K");
    if (c.hhat) {
      if (!krh.h) fail(ErrorCode::kInvalidData, "hhat given but the Krh data has no h");
      const std::int64_t j = ((c.hhat_center % L) + L) % L;
      if (!K.contains(snap((power(r, j) * h).transposed() * *c.hhat), kMatchTol))
        fail(ErrorCode::kInvalidData, "hhat is not in the coset r^j h K");
    }
    if (!(c.mass > 0)) fail(ErrorCode::kInvalidParameter, "component mass must be positive");
  }

  std::vector<Mat3> rpow(static_cast<std::size_t>(L));
  rpow[0] = Mat3::identity();
  for (std::int64_t a = 1; a < L; ++a) rpow[static_cast<std::size_t>(a)] = snap(rpow[static_cast<std::size_t>(a - 1)] * r);
  const std::size_t nk = K.order();
  const int neps = krh.h ? 2 : 1;
  const std::size_t order = static_cast<std::size_t>(L) * static_cast<std::size_t>(neps) * nk;
  if (order > kMaxOrder) fail(ErrorCode::kNotFinite, "group order " + std::to_string(order) + " exceeds the limit");

  auto base = [&](std::int64_t a, int eps) {
    return eps > 0 ? rpow[static_cast<std::size_t>(a)] : snap(rpow[static_cast<std::size_t>(a)] * h);
  };
  auto index_of = [&](const CoverElem& e) -> std::size_t {
    const std::int64_t a = ((e.a % L) + L) % L;
    if (e.eps < 0 && !krh.h) fail(ErrorCode::kInvalidData, "time reflection without h");
    const auto k = K.index_of(snap(base(a, e.eps).transposed() * e.m), kMatchTol);
    if (!k) fail(ErrorCode::kInvalidData, "element lies outside the cover");
    return (static_cast<std::size_t>(a) * static_cast<std::size_t>(neps) + (e.eps < 0 ? 1u : 0u)) * nk + *k;
  };
  std::vector<CoverElem> elems(order);
  for (std::int64_t a = 0; a < L; ++a)
    for (int s = 0; s < neps; ++s)
      for (std::size_t k = 0; k < nk; ++k) {
        const int eps = s == 0 ? 1 : -1;
        CoverElem e{a, eps, snap(base(a, eps) * K.elements()[k])};
        elems[index_of(e)] = e;
      }
  auto mul = [&](const CoverElem& x, const CoverElem& y) {
    return CoverElem{((x.a + x.eps * y.a) % L + L) % L, x.eps * y.eps, snap(x.m * y.m)};
  };

  // bodies: cosets g H_i, numbered by first appearance
  std::vector<int> rep;           // element index of each body's representative
  std::vector<double> masses;
  std::vector<std::vector<int>> body_of(comps.size(), std::vector<int>(order, -1));
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& c = comps[ci];
    std::vector<CoverElem> gens;
    for (const Mat3& x : c.Khat.elements()) gens.push_back({0, 1, x});
    gens.push_back({c.k % L, 1, snap(c.rhat)});
    if (c.hhat) gens.push_back({((c.hhat_center % L) + L) % L, -1, snap(*c.hhat)});
    std::vector<bool> in(order, false);
    std::vector<std::size_t> hs{index_of(CoverElem{})};
    in[hs[0]] = true;
    for (std::size_t head = 0; head < hs.size(); ++head)
      for (const auto& s : gens) {
        const std::size_t j = index_of(mul(elems[hs[head]], s));
        if (!in[j]) {
          in[j] = true;
          hs.push_back(j);
        }
      }
    const auto fixed = std::count_if(hs.begin(), hs.end(), [&](std::size_t j) { return elems[j].a == 0 && elems[j].eps > 0; });
    if (static_cast<std::size_t>(fixed) != c.Khat.order())
      fail(ErrorCode::kInvalidData, "the time-fixed part of the isotropy differs from Khat");
    for (std::size_t g = 0; g < order; ++g) {
      if (body_of[ci][g] >= 0) continue;
      const int b = static_cast<int>(rep.size());
      rep.push_back(static_cast<int>(g));
      masses.push_back(c.mass);
      for (std::size_t j : hs) body_of[ci][index_of(mul(elems[g], elems[j]))] = b;
    }
  }
  const int n = static_cast<int>(rep.size());
  std::vector<int> comp_of(static_cast<std::size_t>(n));
  for (std::size_t ci = 0; ci < comps.size(); ++ci)
    for (std::size_t g = 0; g < order; ++g) comp_of[static_cast<std::size_t>(body_of[ci][g])] = static_cast<int>(ci);

  std::vector<CoverElem> cover_gens{{1 % L, 1, r}};
  if (krh.h) cover_gens.push_back({0, -1, h});
  for (const Mat3& k : small_generating_set(K)) cover_gens.push_back({0, 1, k});

  std::vector<SymmetryElement> gens;
  for (const auto& x : cover_gens) {
    SymmetryElement s;
    s.tau = x.eps > 0 ? TimeIsometry::rotation(Fraction(x.a, L)) : TimeIsometry::reflection(Fraction(x.a, L));
    s.rho = x.m;
    s.sigma.resize(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
      const std::size_t ci = static_cast<std::size_t>(comp_of[static_cast<std::size_t>(b)]);
      s.sigma[static_cast<std::size_t>(b)] =
          body_of[ci][index_of(mul(x, elems[static_cast<std::size_t>(rep[static_cast<std::size_t>(b)])]))];
    }
    gens.push_back(std::move(s));
  }
  return SymmetryGroup::make(gens, n, std::move(masses), period);
}

SymmetryGroup disjoint_sum(const SymmetryGroup& g1, const SymmetryGroup& g2) {
  const Decomposition d1 = decompose(g1), d2 = decompose(g2);
  const auto c = find_conjugator(d1.krh, d2.krh);
  if (!c) fail(ErrorCode::kIncompatibleSum, "the summands have different Krh data");
  KrhData krh = d1.krh;
  krh.m = std::lcm(d1.krh.m, d2.krh.m);
  krh.time_origin = Fraction();
  std::vector<HatKrhData> hats = d1.hats;
  for (HatKrhData h : d2.hats) {
    h.Khat = h.Khat.conjugated(*c);
    h.rhat = snap(conj(*c, h.rhat));
    if (h.hhat) h.hhat = snap(conj(*c, *h.hhat));
    hats.push_back(std::move(h));
  }
  const std::int64_t L = cover_length(krh, hats);
  const double period = static_cast<double>(L) * g1.period() / static_cast<double>(d1.krh.m);
  return group_from_data(krh, hats, period);
}

}  // namespace equiorbit
