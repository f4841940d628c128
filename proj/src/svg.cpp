#include "langfade/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace langfade {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string label(double v, bool logged) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", logged ? std::pow(10.0, v) : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const SvgPlot& plot) {
  auto transform = [&](const std::vector<std::pair<double, double>>& in) {
    std::vector<std::pair<double, double>> out;
    for (auto [x, y] : in) {
      if ((plot.log_x && !(x > 0)) || (plot.log_y && !(y > 0))) continue;
      const double tx = plot.log_x ? std::log10(x) : x;
      const double ty = plot.log_y ? std::log10(y) : y;
      if (std::isfinite(tx) && std::isfinite(ty)) out.emplace_back(tx, ty);
    }
    return out;
  };
  const auto pts = transform(plot.points);
  const auto line = transform(plot.line);

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto* layer : {&pts, &line}) {
    for (auto [x, y] : *layer) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 <= 0) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 <= 0) y0 -= 0.5, y1 += 0.5;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(plot.title) << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\""
      << kTop + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"start\">"
      << label(x0, plot.log_x) << "</text>\n";
  svg << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"end\">"
      << label(x1, plot.log_x) << "</text>\n";
  svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph << "\" text-anchor=\"end\">"
      << label(y0, plot.log_y) << "</text>\n";
  svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">"
      << label(y1, plot.log_y) << "</text>\n";
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << (plot.log_x ? " (log)" : "") << "</text>\n";
  svg << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(plot.y_label) << (plot.log_y ? " (log)" : "") << "</text>\n";
  if (!line.empty()) {
    svg << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < line.size(); ++i) {
      svg << (i ? " " : "") << num(px(line[i].first)) << ',' << num(py(line[i].second));
    }
    svg << "\"/>\n";
  }
  for (auto [x, y] : pts) {
    svg << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"3\" fill=\"#2c6fbb\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace langfade
