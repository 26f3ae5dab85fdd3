#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace mpgreedy::plot {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_log = false;
  int width = 640, height = 420;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  if (std::abs(v) >= 1.0 && std::abs(v) < 1e6 && v == std::round(v)) std::snprintf(buf, sizeof buf, "%.0f", v);
  else std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

inline std::vector<double> linear_ticks(double lo, double hi) {
  double span = hi - lo;
  double raw = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) t.push_back(std::abs(v) < 1e-14 * span ? 0.0 : v);
  return t;
}

}  // namespace detail

/// Static SVG line chart. Log-log axes drop non-positive points.
inline std::string render_svg(const std::vector<Series>& series, const PlotOptions& opt) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  auto tx = [&](double v) { return opt.log_log ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw usage_error("plot: series '" + s.name + "' has mismatched lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_log && !(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, tx(s.y[i]));
      y1 = std::max(y1, tx(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) throw usage_error("plot: nothing to draw");
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double left = 80, right = 20, top = 40, bottom = 50;
  double pw = opt.width - left - right, ph = opt.height - top - bottom;
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + (y1 - v) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << detail::escape(opt.title)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [&](double lo, double hi) {
    if (!opt.log_log) return detail::linear_ticks(lo, hi);
    // decades, then 1-2-5 mantissas, then 1..9, then plain linear ticks
    for (const std::vector<double>& ms : {std::vector<double>{1.0}, {1.0, 2.0, 5.0}, {1, 2, 3, 4, 5, 6, 7, 8, 9}}) {
      std::vector<double> t;
      for (double e = std::floor(lo); e <= std::ceil(hi); e += 1.0) {
        for (double m : ms) {
          double v = e + std::log10(m);
          if (v >= lo && v <= hi) t.push_back(v);
        }
      }
      if (t.size() >= 3) return t;
    }
    std::vector<double> t;
    for (double v : detail::linear_ticks(std::pow(10.0, lo), std::pow(10.0, hi))) {
      if (v > 0.0) t.push_back(std::log10(v));
    }
    return t;
  };
  auto label = [&](double v) { return detail::tick_label(opt.log_log ? std::pow(10.0, v) : v); };
  for (double v : ticks(x0, x1)) {
    os << "<line x1=\"" << detail::num(px(v)) << "\" y1=\"" << top + ph << "\" x2=\"" << detail::num(px(v)) << "\" y2=\""
       << top + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << detail::num(px(v)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << label(v)
       << "</text>\n";
  }
  for (double v : ticks(y0, y1)) {
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << detail::num(py(v)) << "\" x2=\"" << left << "\" y2=\""
       << detail::num(py(v)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << detail::num(py(v) + 4) << "\" text-anchor=\"end\">" << label(v)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << opt.height - 10 << "\" text-anchor=\"middle\">"
     << detail::escape(opt.x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << top + ph / 2
     << ")\">" << detail::escape(opt.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 6];
    os << "<polyline class=\"series\" data-name=\"" << detail::escape(s.name) << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_log && !(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;
      if (!first) os << " ";
      os << detail::num(px(tx(s.x[i]))) << "," << detail::num(py(tx(s.y[i])));
      first = false;
    }
    os << "\"/>\n";
    double ly = top + 16 + 16 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw - 110 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw - 90 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw - 85 << "\" y=\"" << ly << "\">" << detail::escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace mpgreedy::plot
