#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "error.hpp"

namespace equiorbit {

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Evenly spaced hues at fixed saturation and lightness.
std::string color(int i, int n) {
  const double h = 360.0 * i / std::max(1, n);
  return "hsl(" + fmt("%.1f", h) + ",70%,40%)";
}

}  // namespace

std::string render_svg(const FourierLoop& loop, const PlotOptions& opt) {
  if (opt.samples < 2) fail(ErrorCode::kInvalidParameter, "need at least two samples");
  if (opt.size < 64) fail(ErrorCode::kInvalidParameter, "image size must be at least 64");
  if (!(norm(opt.view) > 0)) fail(ErrorCode::kInvalidParameter, "view direction must be non-zero");
  const Vec3 v = normalized(opt.view), e1 = any_orthogonal(v), e2 = cross(v, e1);

  std::vector<std::vector<std::pair<double, double>>> paths(static_cast<std::size_t>(loop.n));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < loop.n; ++i)
    for (int q = 0; q <= opt.samples; ++q) {
      const Vec3 x = loop.position(i, loop.period * q / opt.samples);
      const double a = dot(x, e1), b = dot(x, e2);
      paths[static_cast<std::size_t>(i)].emplace_back(a, b);
      lo = std::min({lo, a, b});
      hi = std::max({hi, a, b});
    }
  double r = std::max(std::fabs(lo), std::fabs(hi));
  if (!(r > 0) || !std::isfinite(r)) r = 1;
  const double S = opt.size, c = S / 2, scale = 0.42 * S / r;
  auto px = [&](double a) { return fmt("%.3f", c + scale * a); };
  auto py = [&](double b) { return fmt("%.3f", c - scale * b); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.size) + "\" height=\"" +
       std::to_string(opt.size) + "\" viewBox=\"0 0 " + std::to_string(opt.size) + " " + std::to_string(opt.size) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axis triad in the lower-left corner
  const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const char* names[3] = {"x", "y", "z"};
  const double ox = 0.1 * S, oy = 0.9 * S, len = 0.06 * S;
  s += "<g id=\"triad\" stroke=\"#444\" stroke-width=\"1.5\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int a = 0; a < 3; ++a) {
    const double dx = len * dot(axes[a], e1), dy = -len * dot(axes[a], e2);
    s += "<line x1=\"" + fmt("%.3f", ox) + "\" y1=\"" + fmt("%.3f", oy) + "\" x2=\"" + fmt("%.3f", ox + dx) + "\" y2=\"" +
         fmt("%.3f", oy + dy) + "\"/>\n";
    s += "<text x=\"" + fmt("%.3f", ox + 1.25 * dx) + "\" y=\"" + fmt("%.3f", oy + 1.25 * dy) + "\" stroke=\"none\" fill=\"#444\">" +
         names[a] + "</text>\n";
  }
  s += "</g>\n";

  for (int i = 0; i < loop.n; ++i) {
    const auto& p = paths[static_cast<std::size_t>(i)];
    s += "<polyline id=\"body" + std::to_string(i + 1) + "\" fill=\"none\" stroke=\"" + color(i, loop.n) +
         "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t q = 0; q < p.size(); ++q) s += (q ? " " : "") + px(p[q].first) + "," + py(p[q].second);
    s += "\"/>\n";
    s += "<circle cx=\"" + px(p[0].first) + "\" cy=\"" + py(p[0].second) + "\" r=\"3\" fill=\"" + color(i, loop.n) + "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string render_csv(const FourierLoop& loop, int samples) {
  if (samples < 1) fail(ErrorCode::kInvalidParameter, "need at least one sample");
  std::string s = "t,body,x,y,z\n";
  for (int q = 0; q < samples; ++q) {
    const double t = loop.period * q / samples;
    for (int i = 0; i < loop.n; ++i) {
      const Vec3 x = loop.position(i, t);
      s += fmt("%.17g", t) + "," + std::to_string(i + 1) + "," + fmt("%.17g", x[0]) + "," + fmt("%.17g", x[1]) + "," +
           fmt("%.17g", x[2]) + "\n";
    }
  }
  return s;
}

}  // namespace equiorbit
