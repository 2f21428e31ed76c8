#pragma once

// Static trajectory renderings: SVG (orthographic projection) and CSV samples.

#include <string>

#include "linalg.hpp"
#include "loop.hpp"

namespace equiorbit {

struct PlotOptions {
  Vec3 view{0, 0, 1};  // viewing direction (projected away)
  int samples = 512;
  int size = 640;      // SVG width and height in pixels
};

std::string render_svg(const FourierLoop& loop, const PlotOptions& options = {});
// Header "t,body,x,y,z"; bodies are 1-based.
std::string render_csv(const FourierLoop& loop, int samples = 512);

}  // namespace equiorbit
