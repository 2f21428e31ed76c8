#include "minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "error.hpp"

namespace equiorbit {

namespace {

using Vec = std::vector<double>;

double dotv(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double normv(const Vec& a) { return std::sqrt(dotv(a, a)); }

void axpy(double t, const Vec& d, Vec& x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * d[i];
}

class Problem {
public:
  Problem(const SymmetryGroup& g, const FrameSpec& frame, double alpha, int modes, int samples)
      : g_(g), frame_(frame), alpha_(alpha), samples_(samples),
        shape_(FourierLoop::zero(g.n(), modes, g.period())) {
    // diagonal of the kinetic Hessian, 2 m T (2 pi max(k,1) / T)^2
    const double T = g.period(), w0 = 2 * std::numbers::pi / T;
    for (int i = 0; i < g.n(); ++i) {
      const double m = g.masses()[static_cast<std::size_t>(i)];
      for (int a = 0; a < 3; ++a) diag_.push_back(2 * m * T * w0 * w0);
      for (int k = 1; k <= modes; ++k)
        for (int a = 0; a < 6; ++a) diag_.push_back(2 * m * T * w0 * w0 * k * k);
    }
  }

  FourierLoop loop(const Vec& x) const {
    FourierLoop l = shape_;
    l.assign(x);
    return l;
  }

  Vec project(const Vec& x) const { return equivariant_project(g_, loop(x)).to_vector(); }

  // Value and projected gradient; value is +inf on the collision sentinel.
  std::pair<ActionValue, Vec> eval(const Vec& x) const {
    const FourierLoop l = loop(x);
    try {
      auto ag = action_and_gradient(l, g_.masses(), alpha_, frame_, samples_);
      return {ag.value, project(ag.grad)};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kGradientUndefined) throw;
      return {eval_action(l, g_.masses(), alpha_, frame_, samples_), {}};
    }
  }

  Vec precondition(const Vec& grad, double gamma) const {
    Vec d(grad.size());
    for (std::size_t p = 0; p < grad.size(); ++p) d[p] = gamma * grad[p] / diag_[p];
    return d;
  }

private:
  const SymmetryGroup& g_;
  FrameSpec frame_;
  double alpha_;
  int samples_;
  FourierLoop shape_;
  Vec diag_;
};

struct RunState {
  Vec x;
  ActionValue value;
  Vec grad;
  double gnorm = 0;
  int iterations = 0;
  std::vector<double> log;
};

// Armijo backtracking along d. Near the round-off floor of A the sufficient
// decrease test cannot be decided, so a step that keeps A within a few ulps
// and shrinks the gradient is also accepted.
bool line_search(const Problem& pb, RunState& st, const Vec& d) {
  const double gd = dotv(st.grad, d);
  if (!(gd < 0)) return false;
  const double f0 = st.value.value;
  const double noise = 8 * std::numeric_limits<double>::epsilon() * (1 + std::fabs(f0));
  double t = 1.0;
  for (int tries = 0; tries < 60; ++tries, t *= 0.5) {
    Vec xn = st.x;
    axpy(t, d, xn);
    xn = pb.project(xn);
    auto [v, gn] = pb.eval(xn);
    if (v.colliding || !std::isfinite(v.value)) continue;
    const bool armijo = v.value <= f0 + 1e-4 * t * gd;
    const double gnn = normv(gn);
    if (armijo || (v.value <= f0 + noise && gnn < st.gnorm)) {
      st.x = std::move(xn);
      st.value = v;
      st.grad = std::move(gn);
      st.gnorm = gnn;
      st.log.push_back(v.value);
      return true;
    }
  }
  return false;
}

void descend(const Problem& pb, RunState& st, const MinimizeOptions& opt) {
  std::deque<std::pair<Vec, Vec>> hist;  // (s, y)
  bool lbfgs = false;
  while (st.gnorm >= opt.grad_tol && st.iterations < opt.max_iter) {
    if (!lbfgs && st.iterations >= opt.descent_iters) lbfgs = true;
    Vec d;
    if (lbfgs && !hist.empty()) {
      // two-loop recursion with a scaled diagonal initial matrix
      Vec q = st.grad;
      std::vector<double> al(hist.size());
      for (std::size_t h = hist.size(); h-- > 0;) {
        const auto& [s, y] = hist[h];
        al[h] = dotv(s, q) / dotv(y, s);
        axpy(-al[h], y, q);
      }
      const auto& [s_last, y_last] = hist.back();
      const Vec Dy = pb.precondition(y_last, 1.0);
      Vec r = pb.precondition(q, dotv(s_last, y_last) / dotv(y_last, Dy));
      for (std::size_t h = 0; h < hist.size(); ++h) {
        const auto& [s, y] = hist[h];
        const double be = dotv(y, r) / dotv(y, s);
        axpy(al[h] - be, s, r);
      }
      d = pb.project(r);
      for (auto& z : d) z = -z;
    } else {
      d = pb.precondition(st.grad, -1.0);
    }
    const Vec x_old = st.x, g_old = st.grad;
    bool ok = line_search(pb, st, d);
    if (!ok && lbfgs && !hist.empty()) {
      hist.clear();
      ok = line_search(pb, st, pb.precondition(st.grad, -1.0));
    }
    ++st.iterations;
    if (!ok) break;
    if (lbfgs) {
      Vec s = st.x, y = st.grad;
      for (std::size_t p = 0; p < s.size(); ++p) {
        s[p] -= x_old[p];
        y[p] -= g_old[p];
      }
      if (dotv(s, y) > 1e-16 * normv(s) * normv(y)) {
        hist.emplace_back(std::move(s), std::move(y));
        if (static_cast<int>(hist.size()) > opt.memory) hist.pop_front();
      }
    }
  }
}

ActionValue start(const Problem& pb, RunState& st) {
  auto [v, gr] = pb.eval(st.x);
  if (!v.colliding) {
    st.value = v;
    st.grad = std::move(gr);
    st.gnorm = normv(st.grad);
    st.log.push_back(v.value);
  }
  return v;
}

std::uint64_t restart_seed(std::uint64_t seed, int r) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(r);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return r == 0 ? seed : z ^ (z >> 31);
}

}  // namespace

MinimizeResult minimize(const SymmetryGroup& g, const FrameSpec& frame, double alpha, std::uint64_t seed,
                        const MinimizeOptions& opt) {
  if (opt.modes < 1) fail(ErrorCode::kInvalidParameter, "modes must be at least 1");
  if (opt.max_iter < 0 || opt.max_restarts < 0) fail(ErrorCode::kInvalidParameter, "iteration limits must be non-negative");
  if (!(opt.grad_tol > 0)) fail(ErrorCode::kInvalidParameter, "gradient tolerance must be positive");
  if (!(alpha > 0) || alpha >= 2) fail(ErrorCode::kInvalidParameter, "alpha must lie in (0, 2)");
  const Problem pb(g, frame, alpha, opt.modes, opt.samples);

  MinimizeResult best;
  bool have = false;
  for (int r = 0; r <= opt.max_restarts; ++r) {
    RunState st;
    const std::uint64_t s = restart_seed(seed, r);
    if (r == 0 && opt.warm_start) {
      const FourierLoop& w = *opt.warm_start;
      if (w.n != g.n()) fail(ErrorCode::kInvalidParameter, "warm start has the wrong number of bodies");
      FourierLoop l = w.with_modes(opt.modes);
      l.period = g.period();
      st.x = pb.project(l.to_vector());
    } else {
      RandomLoop rl = random_equivariant_loop(g, opt.modes, s);
      if (rl.zero) fail(ErrorCode::kEmptyConstraint, "the group admits no non-zero equivariant loop");
      // unit RMS size per body
      const double scale = std::sqrt(static_cast<double>(g.n())) / rl.loop.norm();
      st.x = rl.loop.to_vector();
      for (auto& z : st.x) z *= scale;
    }
    const ActionValue v = start(pb, st);
    if (!v.colliding) descend(pb, st, opt);
    MinimizeResult res{pb.loop(st.x), {}};
    auto& rep = res.report;
    rep.seed_used = s;
    rep.restarts = r;
    rep.iterations = st.iterations;
    rep.action_log = std::move(st.log);
    if (v.colliding) {
      rep.final_action = std::numeric_limits<double>::infinity();
      rep.grad_norm = std::numeric_limits<double>::infinity();
    } else {
      rep.final_action = st.value.value;
      rep.grad_norm = st.gnorm;
    }
    rep.converged = rep.grad_norm < opt.grad_tol;
    rep.min_mutual_distance = collision_report(res.loop, 4 * default_samples(opt.modes)).min_distance;
    rep.collisionless = rep.min_mutual_distance > kCollisionTol;
    if (!have || (rep.collisionless && !best.report.collisionless)) {
      best = std::move(res);
      have = true;
    }
    if (best.report.collisionless) break;
  }
  auto& rep = best.report;
  rep.modes = opt.modes;
  if (rep.collisionless && opt.polish_modes > opt.modes) {
    const Problem pb2(g, frame, alpha, opt.polish_modes, opt.samples);
    RunState st;
    st.x = pb2.project(best.loop.with_modes(opt.polish_modes).to_vector());
    if (!start(pb2, st).colliding) {
      MinimizeOptions o2 = opt;
      o2.descent_iters = 0;
      descend(pb2, st, o2);
      best.loop = pb2.loop(st.x);
      rep.modes = opt.polish_modes;
      rep.final_action = st.value.value;
      rep.grad_norm = st.gnorm;
      rep.iterations += st.iterations;
      rep.action_log.insert(rep.action_log.end(), st.log.begin(), st.log.end());
      rep.converged = rep.grad_norm < opt.grad_tol;
      rep.min_mutual_distance = collision_report(best.loop, 4 * default_samples(opt.polish_modes)).min_distance;
      rep.collisionless = rep.min_mutual_distance > kCollisionTol;
    }
  }
  if (!rep.collisionless)
    rep.warning = "colliding minimizer: no collisionless loop after " + std::to_string(opt.max_restarts) + " restarts";
  else if (!rep.converged)
    rep.warning = "gradient tolerance not reached";
  if (opt.verify && rep.collisionless) {
    try {
      rep.ode_residual = verify_ode(best.loop, g.masses(), alpha, frame).residual;
    } catch (const Error& e) {
      rep.warning = std::string("ODE verification failed: ") + e.what();
    }
  }
  return best;
}

CollisionReport collision_report(const FourierLoop& loop, int samples) {
  if (samples <= 0) samples = 4 * default_samples(loop.modes);
  CollisionReport out;
  out.min_distance = std::numeric_limits<double>::infinity();
  std::vector<Vec3> x(static_cast<std::size_t>(loop.n));
  for (int q = 0; q < samples; ++q) {
    const double t = loop.period * q / samples;
    for (int i = 0; i < loop.n; ++i) x[static_cast<std::size_t>(i)] = loop.position(i, t);
    for (int i = 0; i < loop.n; ++i)
      for (int j = i + 1; j < loop.n; ++j) {
        const double d = norm(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
        if (d < out.min_distance) out = {d, i, j, t};
      }
  }
  return out;
}

OdeCheck verify_ode(const FourierLoop& loop, const std::vector<double>& masses, double alpha,
                    const FrameSpec& frame, int observations) {
  namespace odeint = boost::numeric::odeint;
  const int n = loop.n;
  if (static_cast<int>(masses.size()) != n) fail(ErrorCode::kInvalidParameter, "mass count differs from n");
  if (!(alpha > 0)) fail(ErrorCode::kInvalidParameter, "alpha must be positive");
  if (observations < 2) fail(ErrorCode::kInvalidParameter, "need at least two observation times");
  const Mat3 Om = frame.Omega(), Om2 = Om * Om;
  using State = std::vector<double>;
  double last_t = 0;

  auto rhs = [&](const State& s, State& ds, double t) {
    last_t = t;
    for (int i = 0; i < n; ++i) {
      const auto b = static_cast<std::size_t>(6 * i);
      const Vec3 x{s[b], s[b + 1], s[b + 2]}, v{s[b + 3], s[b + 4], s[b + 5]};
      Vec3 acc = -1.0 * (2.0 * (Om * v) + Om2 * x);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const auto c = static_cast<std::size_t>(6 * j);
        const Vec3 d = x - Vec3{s[c], s[c + 1], s[c + 2]};
        const double r2 = dot(d, d);
        if (r2 < kDistFloor * kDistFloor)
          fail(ErrorCode::kNearCollision, "bodies collide at t = " + std::to_string(t));
        acc -= (alpha * masses[static_cast<std::size_t>(j)] * std::pow(r2, -alpha / 2 - 1)) * d;
      }
      for (std::size_t a = 0; a < 3; ++a) {
        ds[b + a] = v[a];
        ds[b + 3 + a] = acc[a];
      }
    }
  };

  State s(static_cast<std::size_t>(6 * n));
  for (int i = 0; i < n; ++i) {
    const Vec3 x = loop.position(i, 0.0), v = loop.velocity(i, 0.0);
    for (std::size_t a = 0; a < 3; ++a) {
      s[static_cast<std::size_t>(6 * i) + a] = x[a];
      s[static_cast<std::size_t>(6 * i) + 3 + a] = v[a];
    }
  }
  const State s0 = s;
  std::vector<double> times;
  for (int q = 0; q <= observations; ++q) times.push_back(loop.period * q / observations);

  OdeCheck out;
  auto observe = [&](const State& st, double t) {
    for (int i = 0; i < n; ++i) {
      const Vec3 x = loop.position(i, t);
      for (std::size_t a = 0; a < 3; ++a)
        out.max_deviation = std::max(out.max_deviation, std::fabs(st[static_cast<std::size_t>(6 * i) + a] - x[a]));
    }
  };
  try {
    auto stepper = odeint::make_controlled(1e-12, 1e-12, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_times(stepper, rhs, s, times.begin(), times.end(), loop.period / (64.0 * observations), observe,
                            odeint::max_step_checker(200000));
  } catch (const odeint::odeint_error&) {
    fail(ErrorCode::kNearCollision, "integrator stalled near t = " + std::to_string(last_t));
  }
  for (std::size_t p = 0; p < s.size(); p += 6)
    for (std::size_t a = 0; a < 3; ++a) out.periodicity_defect = std::max(out.periodicity_defect, std::fabs(s[p + a] - s0[p + a]));
  out.residual = out.max_deviation + out.periodicity_defect;
  return out;
}

}  // namespace equiorbit
