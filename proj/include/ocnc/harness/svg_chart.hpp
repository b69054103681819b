#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ocnc::harness {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y); drawn in the given order
};

enum class ChartStyle { lines, markers };

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  ChartStyle style = ChartStyle::lines;
  bool diagonal = false;  // draw y = x as a reference line
};

namespace detail {

inline std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick step (1, 2 or 5 times a power of ten) giving about five ticks.
inline double tick_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                           "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

/// Writes a self-contained SVG line or scatter chart. Output depends only on the
/// inputs, so identical data gives identical bytes.
inline void write_svg_chart(std::ostream& out, const ChartSpec& spec, const std::vector<Series>& series) {
  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 55;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (spec.diagonal) x0 = y0 = std::min(x0, y0), x1 = y1 = std::max(x1, y1);
  if (x1 == x0) x0 -= 1, x1 += 1;
  if (y1 == y0) y0 -= 1, y1 += 1;
  const double xs = detail::tick_step(x1 - x0), ys = detail::tick_step(y1 - y0);
  x0 = std::floor(x0 / xs) * xs, x1 = std::ceil(x1 / xs) * xs;
  y0 = std::floor(y0 / ys) * ys, y1 = std::ceil(y1 / ys) * ys;

  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  using detail::fixed;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << detail::xml_escape(spec.title) << "</text>\n";

  for (double v = x0; v <= x1 + xs * 1e-9; v += xs) {
    out << "<line x1=\"" << fixed(px(v)) << "\" y1=\"" << fixed(T) << "\" x2=\"" << fixed(px(v)) << "\" y2=\""
        << fixed(H - B) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << fixed(px(v)) << "\" y=\"" << fixed(H - B + 16) << "\" text-anchor=\"middle\">"
        << detail::tick_label(v) << "</text>\n";
  }
  for (double v = y0; v <= y1 + ys * 1e-9; v += ys) {
    out << "<line x1=\"" << fixed(L) << "\" y1=\"" << fixed(py(v)) << "\" x2=\"" << fixed(W - R) << "\" y2=\""
        << fixed(py(v)) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << fixed(L - 6) << "\" y=\"" << fixed(py(v) + 4) << "\" text-anchor=\"end\">"
        << detail::tick_label(v) << "</text>\n";
  }
  out << "<rect x=\"" << fixed(L) << "\" y=\"" << fixed(T) << "\" width=\"" << fixed(W - L - R) << "\" height=\""
      << fixed(H - T - B) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << fixed(L + (W - L - R) / 2) << "\" y=\"" << fixed(H - 12) << "\" text-anchor=\"middle\">"
      << detail::xml_escape(spec.x_label) << "</text>\n";
  out << "<text transform=\"translate(18 " << fixed(T + (H - T - B) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::xml_escape(spec.y_label) << "</text>\n";

  if (spec.diagonal)
    out << "<line x1=\"" << fixed(px(x0)) << "\" y1=\"" << fixed(py(x0)) << "\" x2=\"" << fixed(px(x1))
        << "\" y2=\"" << fixed(py(x1)) << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    if (spec.style == ChartStyle::lines) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t p = 0; p < s.points.size(); ++p)
        out << (p ? " " : "") << fixed(px(s.points[p].first)) << ',' << fixed(py(s.points[p].second));
      out << "\"/>\n";
    }
    for (auto [x, y] : s.points)
      out << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y)) << "\" r=\""
          << (spec.style == ChartStyle::lines ? "2.5" : "2") << "\" fill=\"" << color << "\""
          << (spec.style == ChartStyle::markers ? " fill-opacity=\"0.6\"" : "") << "/>\n";
    const double ly = T + 10 + 18.0 * static_cast<double>(i);
    out << "<line x1=\"" << fixed(W - R + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(W - R + 32)
        << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n";
    out << "<text x=\"" << fixed(W - R + 38) << "\" y=\"" << fixed(ly + 4) << "\">" << detail::xml_escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ocnc::harness
