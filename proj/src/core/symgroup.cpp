#include "symgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "error.hpp"

namespace equiorbit {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// exp(-2 pi i k a) with the phase reduced exactly in Q/Z.
Complex unit_phase(int k, const Fraction& a) {
  const std::int64_t r = ((static_cast<std::int64_t>(k) % a.den()) * a.num()) % a.den();
  const double ang = -kTwoPi * static_cast<double>(r) / static_cast<double>(a.den());
  return {std::cos(ang), std::sin(ang)};
}

std::vector<Vec3> orthonormal_columns(const Mat3& p) {
  std::vector<Vec3> basis;
  for (int c = 0; c < 3; ++c) {
    Vec3 v{p(0, c), p(1, c), p(2, c)};
    for (const Vec3& b : basis) v -= dot(v, b) * b;
    if (norm(v) > 1e-6) basis.push_back(normalized(v));
  }
  return basis;
}

}  // namespace

double TimeIsometry::apply(double t) const {
  return is_reflection() ? offset.value() - t : offset.value() + t;
}

TimeIsometry TimeIsometry::inverse() const {
  return is_reflection() ? *this : rotation(-offset);
}

TimeIsometry operator*(const TimeIsometry& f, const TimeIsometry& g) {
  // (f g)(t) = f(g(t))
  if (!f.is_reflection() && !g.is_reflection()) return TimeIsometry::rotation(f.offset + g.offset);
  if (!f.is_reflection() && g.is_reflection()) return TimeIsometry::reflection(f.offset + g.offset);
  if (f.is_reflection() && !g.is_reflection()) return TimeIsometry::reflection(f.offset - g.offset);
  return TimeIsometry::rotation(f.offset - g.offset);
}

Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation compose(const Permutation& f, const Permutation& g) {
  Permutation h(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) h[i] = f[static_cast<std::size_t>(g[i])];
  return h;
}

Permutation inverse(const Permutation& f) {
  Permutation h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[static_cast<std::size_t>(f[i])] = static_cast<int>(i);
  return h;
}

bool is_permutation(const Permutation& f) {
  std::vector<bool> seen(f.size(), false);
  for (int x : f) {
    if (x < 0 || static_cast<std::size_t>(x) >= f.size() || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = true;
  }
  return true;
}

SymmetryElement SymmetryElement::inverse() const {
  return {tau.inverse(), rho.transposed(), equiorbit::inverse(sigma)};
}

bool SymmetryElement::same(const SymmetryElement& o) const {
  return tau == o.tau && sigma == o.sigma && same_matrix(rho, o.rho, 1e-7);
}

SymmetryElement operator*(const SymmetryElement& g, const SymmetryElement& h) {
  return {g.tau * h.tau, snap(g.rho * h.rho), compose(g.sigma, h.sigma)};
}

SymmetryGroup SymmetryGroup::make(std::span<const SymmetryElement> generators, int n,
                                  std::vector<double> masses, double period) {
  if (n < 0) fail(ErrorCode::kInvalidParameter, "negative body count");
  if (masses.empty() && n > 0) masses.assign(static_cast<std::size_t>(n), 1.0);
  if (static_cast<int>(masses.size()) != n)
    fail(ErrorCode::kInvalidParameter, "expected " + std::to_string(n) + " masses");
  for (double m : masses)
    if (!(m > 0)) fail(ErrorCode::kInvalidParameter, "masses must be positive");
  if (!(period > 0)) fail(ErrorCode::kInvalidParameter, "period must be positive");

  SymmetryGroup g;
  g.n_ = n;
  g.period_ = period;
  g.masses_ = std::move(masses);
  for (const auto& s : generators) {
    if (static_cast<int>(s.sigma.size()) != n || !is_permutation(s.sigma))
      fail(ErrorCode::kInvalidParameter, "generator permutation is not a permutation of the bodies");
    require_orthogonal(s.rho);
    g.gens_.push_back({s.tau, snap(s.rho), s.sigma});
  }
  g.elems_.push_back(SymmetryElement::identity(n));
  for (std::size_t head = 0; head < g.elems_.size(); ++head) {
    for (const auto& s : g.gens_) {
      SymmetryElement prod = g.elems_[head] * s;
      if (!g.contains(prod)) {
        g.elems_.push_back(std::move(prod));
        if (g.elems_.size() > kMaxOrder)
          fail(ErrorCode::kNotFinite, "symmetry group closure exceeds " + std::to_string(kMaxOrder) + " elements");
      }
    }
  }
  for (const auto& comp : transitive_components(g)) {
    const double m0 = g.masses_[static_cast<std::size_t>(comp.front())];
    for (int i : comp)
      if (std::fabs(g.masses_[static_cast<std::size_t>(i)] - m0) > 1e-12 * std::fabs(m0))
        fail(ErrorCode::kIncompatibleMasses, "bodies " + std::to_string(comp.front() + 1) + " and " +
                                                 std::to_string(i + 1) + " share an orbit but not a mass");
  }
  return g;
}

SymmetryGroup make_group(std::span<const SymmetryElement> generators, int n, std::vector<double> masses,
                         double period) {
  return SymmetryGroup::make(generators, n, std::move(masses), period);
}

std::optional<std::size_t> SymmetryGroup::index_of(const SymmetryElement& g) const {
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (elems_[i].same(g)) return i;
  return std::nullopt;
}

SymmetryGroup SymmetryGroup::from_closed(std::vector<SymmetryElement> elems) const {
  SymmetryGroup g;
  g.n_ = n_;
  g.period_ = period_;
  g.masses_ = masses_;
  g.elems_ = std::move(elems);
  g.gens_ = g.elems_;
  if (g.elems_.empty() || !g.elems_.front().same(SymmetryElement::identity(n_)))
    fail(ErrorCode::kInvalidParameter, "subgroup must start with the identity");
  return g;
}

SymmetryGroup SymmetryGroup::restricted_to(std::span<const int> bodies) const {
  std::vector<int> pos(static_cast<std::size_t>(n_), -1);
  for (std::size_t k = 0; k < bodies.size(); ++k) pos[static_cast<std::size_t>(bodies[k])] = static_cast<int>(k);
  SymmetryGroup g;
  g.n_ = static_cast<int>(bodies.size());
  g.period_ = period_;
  for (int b : bodies) g.masses_.push_back(masses_[static_cast<std::size_t>(b)]);
  for (const auto& e : elems_) {
    SymmetryElement r{e.tau, e.rho, Permutation(bodies.size())};
    for (std::size_t k = 0; k < bodies.size(); ++k) {
      const int img = pos[static_cast<std::size_t>(e.sigma[static_cast<std::size_t>(bodies[k])])];
      if (img < 0) fail(ErrorCode::kInvalidParameter, "body subset is not invariant");
      r.sigma[k] = img;
    }
    if (!g.contains(r)) g.elems_.push_back(std::move(r));
  }
  g.gens_ = g.elems_;
  return g;
}

MatrixGroup SymmetryGroup::space_image() const {
  std::vector<Mat3> rhos;
  for (const auto& e : elems_) rhos.push_back(e.rho);
  return MatrixGroup::from_elements(std::move(rhos));
}

std::int64_t SymmetryGroup::rotation_denominator() const {
  std::int64_t m = 1;
  for (const auto& e : elems_)
    if (!e.tau.is_reflection()) m = std::lcm(m, e.tau.offset.den());
  return m;
}

bool SymmetryGroup::has_time_reflections() const {
  return std::any_of(elems_.begin(), elems_.end(), [](const auto& e) { return e.tau.is_reflection(); });
}

SymmetryGroup SymmetryGroup::with_period(double period) const {
  if (!(period > 0)) fail(ErrorCode::kInvalidParameter, "period must be positive");
  SymmetryGroup g = *this;
  g.period_ = period;
  return g;
}

SymmetryGroup SymmetryGroup::with_masses(std::vector<double> masses) const {
  return make(gens_, n_, std::move(masses), period_);
}

Configuration act_on_config(const SymmetryElement& g, const Configuration& x) {
  Configuration y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[static_cast<std::size_t>(g.sigma[i])] = g.rho * x[i];
  return y;
}

FourierLoop act_on_loop(const SymmetryElement& g, const FourierLoop& loop) {
  if (static_cast<int>(g.sigma.size()) != loop.n)
    fail(ErrorCode::kInvalidParameter, "loop and group disagree on the number of bodies");
  FourierLoop out = FourierLoop::zero(loop.n, loop.modes, loop.period);
  const bool refl = g.tau.is_reflection();
  for (int i = 0; i < loop.n; ++i) {
    const auto& src = loop.coeffs[static_cast<std::size_t>(i)];
    auto& dst = out.coeffs[static_cast<std::size_t>(g.sigma[static_cast<std::size_t>(i)])];
    for (int k = 0; k <= loop.modes; ++k) {
      const Complex ph = unit_phase(k, g.tau.offset);
      CVec3 c = src[static_cast<std::size_t>(k)];
      if (refl)
        for (auto& z : c) z = std::conj(z);
      for (auto& z : c) z *= ph;
      CVec3 r{};
      for (int a = 0; a < 3; ++a)
        r[static_cast<std::size_t>(a)] = g.rho(a, 0) * c[0] + g.rho(a, 1) * c[1] + g.rho(a, 2) * c[2];
      if (k == 0)
        for (auto& z : r) z = Complex(z.real(), 0.0);
      dst[static_cast<std::size_t>(k)] = r;
    }
  }
  return out;
}

std::vector<std::vector<int>> transitive_components(const SymmetryGroup& g) {
  const int n = g.n();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (const auto& e : g.elements())
    for (int i = 0; i < n; ++i) {
      const int a = find(i), b = find(e.sigma[static_cast<std::size_t>(i)]);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  std::vector<std::vector<int>> comps;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return comps;
}

SymmetryGroup core(const SymmetryGroup& g) {
  SymmetryGroup k = g.subgroup([](const SymmetryElement& e) { return e.tau.is_identity(); });
  const auto& el = k.elements();
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = i + 1; j < el.size(); ++j)
      if (same_matrix(el[i].rho, el[j].rho, 1e-7))
        fail(ErrorCode::kDegenerateCore, "rho is not injective on the core");
  return k;
}

SymmetryGroup body_stabilizer(const SymmetryGroup& g, int body) {
  return g.subgroup([body](const SymmetryElement& e) { return e.sigma[static_cast<std::size_t>(body)] == body; });
}

SymmetryGroup isotropy_at_time(const SymmetryGroup& g, const Fraction& t) {
  return g.subgroup([&t](const SymmetryElement& e) { return e.tau.apply(t) == t; });
}

std::vector<MaximalIsotropy> maximal_isotropies(const SymmetryGroup& g) {
  std::set<std::pair<std::int64_t, std::int64_t>> seen;  // (num, den) of covered times
  std::vector<Fraction> fixed;
  for (const auto& e : g.elements()) {
    if (!e.tau.is_reflection()) continue;
    const Fraction b = e.tau.offset;
    for (const Fraction t : {Fraction(b.num(), 2 * b.den()), Fraction(b.num() + b.den(), 2 * b.den())})
      fixed.push_back(t);
  }
  if (fixed.empty()) return {MaximalIsotropy{std::nullopt, core(g)}};
  std::sort(fixed.begin(), fixed.end());
  std::vector<MaximalIsotropy> out;
  for (const Fraction& t : fixed) {
    if (seen.count({t.num(), t.den()})) continue;
    for (const auto& e : g.elements()) {
      const Fraction s = e.tau.apply(t);
      seen.insert({s.num(), s.den()});
    }
    out.push_back({t, isotropy_at_time(g, t)});
  }
  return out;
}

std::vector<Vec3> fixed_space(std::span<const Mat3> mats) {
  Mat3 p = Mat3::zero();
  for (const Mat3& m : mats) p = p + m;
  return orthonormal_columns((1.0 / static_cast<double>(mats.size())) * p);
}

std::vector<Vec3> twisted_fixed_space(const SymmetryGroup& g) {
  std::vector<Mat3> tw;
  for (const auto& e : g.elements()) {
    const double s = e.tau.det() * (e.rho.det() > 0 ? 1.0 : -1.0);
    tw.push_back(s * e.rho);
  }
  return fixed_space(tw);
}

FrameNormalization normalize_frame(const SymmetryGroup& g) {
  FrameNormalization out{g, 0.0, {0, 0, 1}, false};
  const auto axes = twisted_fixed_space(g);
  if (axes.empty()) return out;
  const std::int64_t m = g.rotation_denominator();
  if (m == 1) return out;

  const SymmetryGroup k = core(g);
  const Fraction step(1, m);
  const SymmetryElement* gen = nullptr;
  for (const auto& e : g.elements())
    if (!e.tau.is_reflection() && e.tau.offset == step) {
      gen = &e;
      break;
    }
  if (gen == nullptr) return out;

  // candidate axes: the twisted fixed space; prefer the axis the generator rotates about
  std::vector<Vec3> candidates = axes;
  if (axes.size() > 1) {
    const Mat3 proper = gen->rho.det() > 0 ? gen->rho : -gen->rho;
    if (rotation_angle(proper) > 1e-9) candidates.insert(candidates.begin(), rotation_axis(proper));
  }
  for (const Vec3& v : candidates) {
    // v must be a rotation axis of the whole group
    bool ok = true;
    for (const auto& e : g.elements()) {
      const Vec3 w = e.rho * v;
      if (norm(w - v) > 1e-7 && norm(w + v) > 1e-7) ok = false;
    }
    if (!ok) continue;
    const Vec3 e1 = any_orthogonal(v), e2 = cross(v, e1);
    for (const auto& kk : k.elements()) {
      const Mat3 rho1 = gen->rho * kk.rho;
      const Vec3 w = rho1 * e1;
      const double beta = std::atan2(dot(w, e2), dot(w, e1));
      if (std::fabs(beta) < 1e-12) return out;  // already reduced
      std::vector<SymmetryElement> elems;
      for (const auto& e : g.elements()) {
        const double turns = static_cast<double>(m) * e.tau.offset.value();
        SymmetryElement r = e;
        r.rho = snap(axis_rotation(v, -beta * turns) * e.rho);
        elems.push_back(std::move(r));
      }
      try {
        SymmetryGroup reduced = SymmetryGroup::make(elems, g.n(), g.masses(), g.period());
        if (reduced.order() != g.order()) continue;
        out.group = std::move(reduced);
        out.theta = beta * static_cast<double>(m) / g.period();
        out.axis = v;
        out.reduced = true;
        return out;
      } catch (const Error&) {
        continue;
      }
    }
  }
  return out;
}

}  // namespace equiorbit
