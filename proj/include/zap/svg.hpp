#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace zap::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 860;
  int height = 560;
};

// Static SVG 1.1 line chart. Non-finite points (and non-positive ones on a
// log axis) are skipped, breaking the polyline there.
void write_line_chart(const std::filesystem::path& path,
                      const std::vector<Series>& series,
                      const ChartOptions& options);

}  // namespace zap::svg
