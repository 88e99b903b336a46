#include "zap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "zap/errors.hpp"

namespace zap::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_line_chart(const std::filesystem::path& path,
                      const std::vector<Series>& series,
                      const ChartOptions& options) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");

  const double margin_left = 70.0;
  const double margin_right = 160.0;
  const double margin_top = 40.0;
  const double margin_bottom = 55.0;
  const double plot_w = options.width - margin_left - margin_right;
  const double plot_h = options.height - margin_top - margin_bottom;

  auto usable = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    return !options.log_y || y > 0.0;
  };

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!usable(x, y)) continue;
      const double yv = options.log_y ? std::log10(y) : y;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, yv);
      y_max = std::max(y_max, yv);
    }
  }
  if (!(x_min <= x_max)) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  auto px = [&](double x) {
    return margin_left + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto py = [&](double y) {
    const double yv = options.log_y ? std::log10(y) : y;
    return margin_top + (y_max - yv) / (y_max - y_min) * plot_h;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << options.width << "\" height=\"" << options.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(margin_left + plot_w / 2) << "\" y=\"22\" "
      << "text-anchor=\"middle\" font-size=\"15\">" << options.title
      << "</text>\n";

  // Axes.
  out << "<rect x=\"" << num(margin_left) << "\" y=\"" << num(margin_top)
      << "\" width=\"" << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int ticks = 6;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / ticks;
    const double fy = y_min + (y_max - y_min) * i / ticks;
    const double tx = px(fx);
    const double ty = margin_top + plot_h - plot_h * i / ticks;
    out << "<line x1=\"" << num(tx) << "\" y1=\"" << num(margin_top + plot_h)
        << "\" x2=\"" << num(tx) << "\" y2=\""
        << num(margin_top + plot_h + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(tx) << "\" y=\""
        << num(margin_top + plot_h + 20)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num(fx)
        << "</text>\n";
    out << "<line x1=\"" << num(margin_left - 5) << "\" y1=\"" << num(ty)
        << "\" x2=\"" << num(margin_left) << "\" y2=\"" << num(ty)
        << "\" stroke=\"black\"/>\n";
    const std::string label =
        options.log_y ? ("1e" + num(fy)) : num(fy);
    out << "<text x=\"" << num(margin_left - 8) << "\" y=\"" << num(ty + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << label << "</text>\n";
  }
  out << "<text x=\"" << num(margin_left + plot_w / 2) << "\" y=\""
      << num(options.height - 12.0)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << options.x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << num(margin_top + plot_h / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << num(margin_top + plot_h / 2) << ")\">" << options.y_label
      << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(*kPalette))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    bool gap = true;
    for (const auto& [x, y] : series[k].points) {
      if (!usable(x, y)) {
        gap = true;
        continue;
      }
      if (!gap) out << " ";
      out << num(px(x)) << "," << num(py(y));
      gap = false;
    }
    out << "\"/>\n";
    const double ly = margin_top + 16.0 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << num(margin_left + plot_w + 10) << "\" y1=\""
        << num(ly - 4) << "\" x2=\"" << num(margin_left + plot_w + 34)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(margin_left + plot_w + 40) << "\" y=\""
        << num(ly) << "\" font-size=\"12\">" << series[k].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace zap::svg
