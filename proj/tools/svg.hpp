#pragma once

#include <string>
#include <vector>

namespace maxdens::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

/// Standalone SVG document with axes, one polyline per series and a legend.
std::string render_svg(const Figure& figure);

}  // namespace maxdens::plot
