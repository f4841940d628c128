#pragma once

#include <string>
#include <utility>
#include <vector>

namespace langfade {

// Bare-bones SVG chart: axes with min/max tick labels, a scatter layer and a
// polyline layer. Log axes take log10 of the data (non-positive values dropped).
struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<std::pair<double, double>> points;
  std::vector<std::pair<double, double>> line;
};

std::string render_svg(const SvgPlot& plot);

}  // namespace langfade
