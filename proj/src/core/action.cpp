#include "action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "error.hpp"
#include "parallel.hpp"

namespace equiorbit {

namespace {

constexpr std::size_t kChunks = 32;

void check_inputs(const FourierLoop& loop, const std::vector<double>& masses, double alpha) {
  if (static_cast<int>(masses.size()) != loop.n) fail(ErrorCode::kInvalidParameter, "mass count differs from n");
  for (double m : masses)
    if (!(m > 0) || !std::isfinite(m)) fail(ErrorCode::kInvalidParameter, "masses must be positive");
  if (!(alpha > 0)) fail(ErrorCode::kInvalidParameter, "alpha must be positive");
  if (!(loop.period > 0)) fail(ErrorCode::kInvalidPeriod, "period must be positive");
}

struct Trig {
  int M = 0;
  int N = 0;
  std::vector<double> c, s;  // [sample * (N + 1) + k]
  Trig(int m, int n) : M(m), N(n), c(static_cast<std::size_t>(m) * (n + 1)), s(c.size()) {
    for (int q = 0; q < m; ++q)
      for (int k = 0; k <= n; ++k) {
        // reduce k q mod M first so the angle stays small
        const double ph = 2 * std::numbers::pi * static_cast<double>((static_cast<std::int64_t>(k) * q) % m) / m;
        c[idx(q, k)] = std::cos(ph);
        s[idx(q, k)] = std::sin(ph);
      }
  }
  std::size_t idx(int q, int k) const { return static_cast<std::size_t>(q) * (N + 1) + static_cast<std::size_t>(k); }
};

struct Partial {
  double kinetic = 0, potential = 0;
  double min_d = std::numeric_limits<double>::infinity();
  std::vector<double> grad;
};

// Shared evaluation; the gradient is accumulated only when want_grad is set.
ActionGradient evaluate(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                        const FrameSpec& frame, int samples, bool want_grad) {
  check_inputs(loop, masses, alpha);
  const int n = loop.n, N = loop.modes;
  const int M = samples > 0 ? samples : default_samples(N);
  const double T = loop.period, w = T / M, w0 = 2 * std::numbers::pi / T;
  const Mat3 Om = frame.Omega();
  const Mat3 OmT = Om.transposed();
  const bool unit_alpha = alpha == 1.0;
  const Trig trig(M, N);
  const std::size_t stride = 3 * (2 * static_cast<std::size_t>(N) + 1);

  std::vector<Partial> parts(kChunks);
  parallel_chunks(static_cast<std::size_t>(M), kChunks, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Partial& P = parts[chunk];
    if (want_grad) P.grad.assign(loop.dimension(), 0.0);
    std::vector<Vec3> x(static_cast<std::size_t>(n)), xd(static_cast<std::size_t>(n)), gx(static_cast<std::size_t>(n));
    for (std::size_t qs = b; qs < e; ++qs) {
      const int q = static_cast<int>(qs);
      for (int i = 0; i < n; ++i) {
        const auto& c = loop.coeffs[static_cast<std::size_t>(i)];
        Vec3 p{c[0][0].real(), c[0][1].real(), c[0][2].real()}, v{};
        for (int k = 1; k <= N; ++k) {
          const double co = trig.c[trig.idx(q, k)], si = trig.s[trig.idx(q, k)], wk = w0 * k;
          for (std::size_t a = 0; a < 3; ++a) {
            const double re = c[static_cast<std::size_t>(k)][a].real(), im = c[static_cast<std::size_t>(k)][a].imag();
            p[a] += 2 * (re * co - im * si);
            v[a] -= 2 * wk * (re * si + im * co);
          }
        }
        x[static_cast<std::size_t>(i)] = p;
        xd[static_cast<std::size_t>(i)] = v;
      }
      double kin = 0, pot = 0;
      for (int i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const Vec3 u = xd[iu] + Om * x[iu];
        kin += 0.5 * masses[iu] * dot(u, u);
        if (want_grad) {
          xd[iu] = masses[iu] * u;          // reuse as d/dx' of the integrand
          gx[iu] = OmT * xd[iu];            // kinetic part of d/dx
        }
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const Vec3 d = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
          const double r2 = dot(d, d), r = std::sqrt(r2);
          P.min_d = std::min(P.min_d, r);
          if (r < kDistFloor) {
            if (want_grad) fail(ErrorCode::kGradientUndefined, "collision at a sample point");
            continue;
          }
          const double mm = masses[static_cast<std::size_t>(i)] * masses[static_cast<std::size_t>(j)];
          const double ra = unit_alpha ? 1 / r : std::pow(r2, -alpha / 2);
          pot += mm * ra;
          if (want_grad) {
            const Vec3 f = (-alpha * mm * ra / r2) * d;
            gx[static_cast<std::size_t>(i)] += f;
            gx[static_cast<std::size_t>(j)] -= f;
          }
        }
      P.kinetic += w * kin;
      P.potential += w * pot;
      if (!want_grad) continue;
      for (int i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        double* g = P.grad.data() + iu * stride;
        const Vec3 GX = w * gx[iu], GV = w * xd[iu];
        for (std::size_t a = 0; a < 3; ++a) g[a] += GX[a];
        for (int k = 1; k <= N; ++k) {
          const double co = trig.c[trig.idx(q, k)], si = trig.s[trig.idx(q, k)], wk = w0 * k;
          double* gk = g + 3 + 6 * static_cast<std::size_t>(k - 1);
          for (std::size_t a = 0; a < 3; ++a) {
            gk[a] += 2 * (GX[a] * co - GV[a] * wk * si);
            gk[3 + a] += -2 * (GX[a] * si + GV[a] * wk * co);
          }
        }
      }
    }
  });

  ActionGradient out;
  out.value.min_distance = std::numeric_limits<double>::infinity();
  if (want_grad) out.grad.assign(loop.dimension(), 0.0);
  for (const auto& P : parts) {
    out.value.kinetic += P.kinetic;
    out.value.potential += P.potential;
    out.value.min_distance = std::min(out.value.min_distance, P.min_d);
    if (want_grad && !P.grad.empty())
      for (std::size_t p = 0; p < out.grad.size(); ++p) out.grad[p] += P.grad[p];
  }
  if (n < 2) out.value.min_distance = std::numeric_limits<double>::infinity();
  out.value.colliding = out.value.min_distance < kDistFloor;
  out.value.value = out.value.colliding ? std::numeric_limits<double>::infinity()
                                        : out.value.kinetic + out.value.potential;
  return out;
}

}  // namespace

int default_samples(int modes) { return std::max(1024, 8 * modes); }

ActionValue eval_action(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                        const FrameSpec& frame, int samples) {
  return evaluate(loop, masses, alpha, frame, samples, false).value;
}

ActionGradient action_and_gradient(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                                   const FrameSpec& frame, int samples) {
  return evaluate(loop, masses, alpha, frame, samples, true);
}

std::vector<double> grad_action(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                                const FrameSpec& frame, int samples) {
  return evaluate(loop, masses, alpha, frame, samples, true).grad;
}

FourierLoop equivariant_project(const SymmetryGroup& g, const FourierLoop& loop) {
  if (loop.n != g.n()) fail(ErrorCode::kInvalidParameter, "loop and group disagree on the number of bodies");
  if (std::fabs(loop.period - g.period()) > 1e-12 * std::max(1.0, g.period()))
    fail(ErrorCode::kInvalidPeriod, "loop period differs from the group period");
  FourierLoop out = FourierLoop::zero(loop.n, loop.modes, loop.period);
  const double inv = 1.0 / static_cast<double>(g.order());
  for (const auto& e : g.elements()) {
    const FourierLoop img = act_on_loop(e, loop);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
      for (std::size_t k = 0; k < out.coeffs[i].size(); ++k)
        for (std::size_t a = 0; a < 3; ++a) out.coeffs[i][k][a] += inv * img.coeffs[i][k][a];
  }
  return out;
}

RandomLoop random_equivariant_loop(const SymmetryGroup& g, int modes, std::uint64_t seed) {
  FourierLoop raw = FourierLoop::zero(g.n(), modes, g.period());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (auto& body : raw.coeffs)
    for (std::size_t k = 0; k < body.size(); ++k) {
      const double s = 1.0 / (1.0 + static_cast<double>(k));
      for (auto& z : body[k]) {
        const double re = nd(rng), im = nd(rng);
        z = k == 0 ? Complex(s * re, 0.0) : Complex(s * re, s * im);
      }
    }
  RandomLoop out{equivariant_project(g, raw), false};
  out.zero = out.loop.norm() <= 1e-12 * raw.norm();
  if (out.zero) out.loop = FourierLoop::zero(g.n(), modes, g.period());
  return out;
}

Vec3 angular_momentum(const FourierLoop& loop, const std::vector<double>& masses, double t, const FrameSpec& frame) {
  if (static_cast<int>(masses.size()) != loop.n) fail(ErrorCode::kInvalidParameter, "mass count differs from n");
  Vec3 J{};
  for (int i = 0; i < loop.n; ++i) {
    const Vec3 x = loop.position(i, t);
    const Vec3 v = loop.velocity(i, t) + cross(frame.omega, x);
    J += masses[static_cast<std::size_t>(i)] * cross(x, v);
  }
  return J;
}

FourierLoop rotating_frame_map(const FourierLoop& q, const Vec3& axis, int turns) {
  if (!(norm(axis) > 0)) fail(ErrorCode::kInvalidFrame, "rotation axis must be non-zero");
  const Vec3 v = normalized(axis), e1 = any_orthogonal(v), e2 = cross(v, e1);
  const int N = q.modes, j = std::abs(turns), N2 = N + j;
  FourierLoop x = FourierLoop::zero(q.n, N2, q.period);
  auto coef = [&](const std::vector<CVec3>& c, int k, const Vec3& e) {
    if (std::abs(k) > N) return Complex{};
    const CVec3& z = c[static_cast<std::size_t>(std::abs(k))];
    const Complex s = e[0] * z[0] + e[1] * z[1] + e[2] * z[2];
    return k >= 0 ? s : std::conj(s);
  };
  for (std::size_t i = 0; i < static_cast<std::size_t>(q.n); ++i) {
    const auto& c = q.coeffs[i];
    // planar part as u = q.e1 + i q.e2, multiplied by exp(i turns w t)
    auto W = [&](int k) {
      const int src = k - turns;
      return coef(c, src, e1) + Complex(0, 1) * coef(c, src, e2);
    };
    for (int k = 0; k <= N2; ++k) {
      const Complex wk = W(k), wm = std::conj(W(-k));
      const Complex p1 = 0.5 * (wk + wm), p2 = (wk - wm) / Complex(0, 2), p3 = coef(c, k, v);
      for (std::size_t a = 0; a < 3; ++a) {
        Complex z = p1 * e1[a] + p2 * e2[a] + p3 * v[a];
        if (k == 0) z = Complex(z.real(), 0.0);
        x.coeffs[i][static_cast<std::size_t>(k)][a] = z;
      }
    }
  }
  return x;
}

std::vector<std::vector<Vec3>> sample_positions(const FourierLoop& loop, int samples) {
  if (samples < 1) fail(ErrorCode::kInvalidParameter, "need at least one sample");
  std::vector<std::vector<Vec3>> out(static_cast<std::size_t>(samples), std::vector<Vec3>(static_cast<std::size_t>(loop.n)));
  for (int q = 0; q < samples; ++q)
    for (int i = 0; i < loop.n; ++i)
      out[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)] = loop.position(i, loop.period * q / samples);
  return out;
}

}  // namespace equiorbit
