#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "maxdens/errors.hpp"

namespace maxdens::plot {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 200, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
  double value(double t) const {
    const double v = lo + t * (hi - lo);
    return log ? std::pow(10.0, v) : v;
  }
};

Axis make_axis(const std::vector<Series>& series, bool x, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series)
    for (double v : x ? s.x : s.y) {
      if (!std::isfinite(v) || (log && v <= 0)) continue;
      const double t = log ? std::log10(v) : v;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  if (!std::isfinite(lo)) throw ParseError("nothing to plot");
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad, log};
}

}  // namespace

std::string render_svg(const Figure& fig) {
  const Axis ax = make_axis(fig.series, true, fig.log_x);
  const Axis ay = make_axis(fig.series, false, fig.log_y);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(fig.title)
    << "</text>\n";
  o << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    const double px = x0 + t * (x1 - x0), py = y0 + t * (y1 - y0);
    o << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << px << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << num(ax.value(t)) << "</text>\n";
    o << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py << "\" stroke=\"black\"/>";
    o << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << num(ay.value(t)) << "</text>\n";
  }
  o << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
    << escape(fig.x_label) << "</text>\n";
  o << "<text transform=\"translate(20," << (y0 + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(fig.y_label) << "</text>\n";

  for (std::size_t i = 0; i < fig.series.size(); ++i) {
    const auto& s = fig.series[i];
    const char* color = kColors[i % std::size(kColors)];
    o << "<polyline class=\"series\" data-label=\"" << escape(s.label) << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
      if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
      if ((fig.log_x && s.x[j] <= 0) || (fig.log_y && s.y[j] <= 0)) continue;
      o << num(ax.map(s.x[j], x0, x1)) << ',' << num(ay.map(s.y[j], y0, y1)) << ' ';
    }
    o << "\"/>\n";
    const double ly = kTop + 16 * static_cast<double>(i) + 8;
    o << "<line x1=\"" << x1 + 12 << "\" y1=\"" << ly << "\" x2=\"" << x1 + 36 << "\" y2=\"" << ly << "\" stroke=\""
      << color << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
    o << "<text x=\"" << x1 + 42 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace maxdens::plot
