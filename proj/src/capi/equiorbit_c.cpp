#include "equiorbit/equiorbit.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "action.hpp"
#include "classify.hpp"
#include "error.hpp"
#include "io.hpp"
#include "krh.hpp"
#include "minimize.hpp"
#include "parallel.hpp"
#include "plot.hpp"
#include "pointgroups.hpp"
#include "svar.hpp"
#include "symgroup.hpp"

using namespace equiorbit;

struct eo_group {
  SymmetryGroup g;
};

struct eo_loop {
  FourierLoop loop;
  TrajectoryMeta meta;
};

namespace {

thread_local std::string g_last_error;

template <class F>
eo_status guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return EO_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<eo_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return EO_INTERNAL;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::kInvalidParameter, std::string(what) + " must not be NULL");
}

Vec3 vec(const double* v) { return v ? Vec3{v[0], v[1], v[2]} : Vec3{0, 0, 0}; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Catalog labels for p = 1..pmax (or the single given p).
std::vector<Label> catalog_labels(std::optional<Family> only, int p, int pmax) {
  std::vector<Label> out;
  for (Family f : catalog_families()) {
    if (only && *only != f) continue;
    if (!has_parameter(f)) {
      out.push_back(make_label(f));
      continue;
    }
    const int lo = p > 0 ? p : 1, hi = p > 0 ? p : pmax;
    for (int q = lo; q <= hi; ++q) {
      try {
        catalog_entry(make_label(f, q));
        out.push_back(make_label(f, q));
      } catch (const Error&) {
        if (p > 0) throw;
      }
    }
  }
  return out;
}

}  // namespace

extern "C" {

const char* eo_version(void) { return "1.0.0"; }

const char* eo_status_name(eo_status status) {
  if (status == EO_OK) return "ok";
  if (status == EO_INTERNAL) return "internal";
  return error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* eo_last_error(void) { return g_last_error.c_str(); }

void eo_string_free(char* text) { std::free(text); }

int eo_thread_count(void) { return thread_count(); }

eo_status eo_catalog_json(const char* family, int p, int pmax, char** out_json) {
  return guard([&] {
    need(out_json, "out_json");
    if (pmax == 0) pmax = 12;
    if (pmax < 1) fail(ErrorCode::kInvalidParameter, "pmax must be positive");
    std::optional<Family> only;
    if (family) only = parse_family(family);
    if (only && !has_parameter(*only)) p = 0;
    // aliases (Pprime, Cph) are not table rows; resolve them to their row
    const std::vector<Family> rows = catalog_families();
    if (only && std::find(rows.begin(), rows.end(), *only) == rows.end()) {
      if (p < 1) fail(ErrorCode::kInvalidParameter, "alias families need an explicit p");
      const Label c = canonical(make_label(*only, p));
      only = c.family;
      p = c.p;
    }
    Json arr = Json::array();
    for (const Label& l : catalog_labels(only, p, pmax)) arr.push_back(catalog_entry_to_json(catalog_entry(l)));
    *out_json = dup(dump(arr));
  });
}

eo_status eo_admissible_cores_json(int pmax, int eliminated, char** out_json) {
  return guard([&] {
    need(out_json, "out_json");
    if (pmax < 1) fail(ErrorCode::kInvalidParameter, "pmax must be positive");
    Json arr = Json::array();
    std::vector<Label> seen;
    for (const Label& l : catalog_labels(std::nullopt, 0, pmax)) {
      const Label c = canonical(l);
      if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
      seen.push_back(c);
      const bool ok = eliminated ? admissible_core_eliminated(c) : admissible_core(c);
      if (!ok) continue;
      Json j = label_to_json(c);
      j["symbol"] = symbol(c);
      arr.push_back(j);
    }
    *out_json = dup(dump(arr));
  });
}

eo_status eo_admissible_extensions_json(const char* label_json, char** out_json) {
  return guard([&] {
    need(label_json, "label_json");
    need(out_json, "out_json");
    const Label k = canonical(label_from_json(parse_json(label_json)));
    Json arr = Json::array();
    for (const Label& l : admissible_extensions(k)) {
      Json j = label_to_json(l);
      j["symbol"] = symbol(l);
      arr.push_back(j);
    }
    *out_json = dup(dump(arr));
  });
}

eo_status eo_group_from_json(const char* json, eo_group** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new eo_group{group_from_json(parse_json(json))};
  });
}

void eo_group_free(eo_group* group) { delete group; }

eo_status eo_group_to_json(const eo_group* group, char** out_json) {
  return guard([&] {
    need(group, "group");
    need(out_json, "out_json");
    *out_json = dup(dump(group_to_json(group->g)));
  });
}

eo_status eo_group_order(const eo_group* group, size_t* out) {
  return guard([&] {
    need(group, "group");
    need(out, "out");
    *out = group->g.order();
  });
}

eo_status eo_group_bodies(const eo_group* group, int* out) {
  return guard([&] {
    need(group, "group");
    need(out, "out");
    *out = group->g.n();
  });
}

eo_status eo_group_decompose_json(const eo_group* group, char** out_json) {
  return guard([&] {
    need(group, "group");
    need(out_json, "out_json");
    *out_json = dup(dump(decomposition_to_json(group->g, decompose(group->g))));
  });
}

eo_status eo_group_check_json(const eo_group* group, const double omega[3], char** out_json) {
  return guard([&] {
    need(group, "group");
    need(out_json, "out_json");
    *out_json = dup(dump(report_to_json(group->g, check_group(group->g, vec(omega)))));
  });
}

eo_status eo_group_sum(const eo_group* a, const eo_group* b, eo_group** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new eo_group{disjoint_sum(a->g, b->g)};
  });
}

eo_status eo_group_normalize_frame(const eo_group* group, eo_group** out, double* theta, double axis[3]) {
  return guard([&] {
    need(group, "group");
    need(out, "out");
    FrameNormalization fn = normalize_frame(group->g);
    if (theta) *theta = fn.theta;
    if (axis)
      for (int a = 0; a < 3; ++a) axis[a] = fn.axis[static_cast<std::size_t>(a)];
    *out = new eo_group{std::move(fn.group)};
  });
}

eo_status eo_s_integral(const double s[3], const double delta[3], double alpha, double* out) {
  return guard([&] {
    need(s, "s");
    need(delta, "delta");
    need(out, "out");
    *out = s_integral(vec(s), vec(delta), alpha);
  });
}

void eo_minimize_options_default(eo_minimize_options* o) {
  if (!o) return;
  const MinimizeOptions d;
  o->modes = d.modes;
  o->max_iter = d.max_iter;
  o->grad_tol = d.grad_tol;
  o->max_restarts = d.max_restarts;
  o->samples = d.samples;
  o->polish_modes = d.polish_modes;
  o->verify = d.verify ? 1 : 0;
}

eo_status eo_minimize(const eo_group* group, const double omega[3], double alpha, uint64_t seed,
                      const eo_minimize_options* options, const eo_loop* warm_start, eo_loop** out_loop,
                      char** out_report_json) {
  return guard([&] {
    need(group, "group");
    MinimizeOptions o;
    if (options) {
      o.modes = options->modes;
      o.max_iter = options->max_iter;
      o.grad_tol = options->grad_tol;
      o.max_restarts = options->max_restarts;
      o.samples = options->samples;
      o.polish_modes = options->polish_modes;
      o.verify = options->verify != 0;
    }
    if (warm_start) o.warm_start = warm_start->loop;
    const FrameSpec frame{vec(omega)};
    MinimizeResult r = minimize(group->g, frame, alpha, seed, o);
    TrajectoryMeta meta{group->g.masses(), alpha, frame.omega, std::nullopt};
    if (norm(frame.omega) > 0) {
      meta.view_axis = normalized(frame.omega);
    } else {
      const AxesResult ax = rotation_axes(group->g);
      if (ax.kind != "none" && !ax.basis.empty()) meta.view_axis = ax.basis.front();
    }
    if (out_report_json) {
      Json j = minimize_report_to_json(r.report);
      j["alpha"] = alpha;
      j["omega"] = Json::array({frame.omega[0], frame.omega[1], frame.omega[2]});
      j["period"] = group->g.period();
      *out_report_json = dup(dump(j));
    }
    if (out_loop) *out_loop = new eo_loop{std::move(r.loop), std::move(meta)};
  });
}

eo_status eo_loop_from_json(const char* json, eo_loop** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    auto* l = new eo_loop{};
    try {
      l->loop = trajectory_from_json(parse_json(json), &l->meta);
    } catch (...) {
      delete l;
      throw;
    }
    *out = l;
  });
}

void eo_loop_free(eo_loop* loop) { delete loop; }

eo_status eo_loop_to_json(const eo_loop* loop, int samples, char** out_json) {
  return guard([&] {
    need(loop, "loop");
    need(out_json, "out_json");
    *out_json = dup(trajectory_to_json(loop->loop, loop->meta, samples));
  });
}

eo_status eo_loop_action(const eo_loop* loop, double* out) {
  return guard([&] {
    need(loop, "loop");
    need(out, "out");
    *out = eval_action(loop->loop, loop->meta.masses, loop->meta.alpha, FrameSpec{loop->meta.omega}).value;
  });
}

eo_status eo_loop_verify_json(const eo_loop* loop, char** out_json) {
  return guard([&] {
    need(loop, "loop");
    need(out_json, "out_json");
    const FrameSpec frame{loop->meta.omega};
    const auto& m = loop->meta.masses;
    Json j;
    const ActionValue a = eval_action(loop->loop, m, loop->meta.alpha, frame);
    const CollisionReport c = collision_report(loop->loop);
    j["action"] = a.colliding ? Json(nullptr) : Json(a.value);
    j["min_distance"] = c.min_distance;
    j["closest_pair"] = c.body_a >= 0 ? Json::array({c.body_a + 1, c.body_b + 1}) : Json(nullptr);
    j["closest_time"] = c.time;
    j["collisionless"] = c.min_distance > kCollisionTol;
    if (!a.colliding) {
      const auto g = grad_action(loop->loop, m, loop->meta.alpha, frame);
      double s = 0;
      for (double x : g) s += x * x;
      j["grad_norm"] = std::sqrt(s);
      const OdeCheck o = verify_ode(loop->loop, m, loop->meta.alpha, frame);
      j["ode_residual"] = o.residual;
      j["max_deviation"] = o.max_deviation;
      j["periodicity_defect"] = o.periodicity_defect;
    }
    const Vec3 J = angular_momentum(loop->loop, m, 0.0, frame);
    j["angular_momentum"] = Json::array({J[0], J[1], J[2]});
    *out_json = dup(dump(j));
  });
}

eo_status eo_loop_plot(const eo_loop* loop, const char* format, const double view[3], int samples, char** out_text) {
  return guard([&] {
    need(loop, "loop");
    need(format, "format");
    need(out_text, "out_text");
    const std::string f = format;
    if (samples <= 0) samples = 512;
    if (f == "csv") {
      *out_text = dup(render_csv(loop->loop, samples));
    } else if (f == "svg") {
      PlotOptions o;
      o.samples = samples;
      if (view)
        o.view = vec(view);
      else if (loop->meta.view_axis)
        o.view = *loop->meta.view_axis;
      *out_text = dup(render_svg(loop->loop, o));
    } else {
      fail(ErrorCode::kInvalidParameter, "format must be svg or csv");
    }
  });
}

}  // extern "C"
