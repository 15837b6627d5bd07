#pragma once

// Report rendering: CSV tables and SVG plots as pure functions of a report.

#include "gradedk/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace gradedk::cli {

inline std::string number(double v, const char* f = "%.17g") {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string csv_cell(const Json& v) {
  if (v.is_number()) return number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

/// report["table"] = {"columns": [...], "rows": [[...], ...]}
inline std::string render_csv(const Json& report) {
  std::ostringstream out;
  const Json& table = report.at("table");
  const auto& columns = table.at("columns");
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << csv_cell(columns[i]);
  out << "\n";
  for (const auto& row : table.at("rows")) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
  return out.str();
}

inline bool has_plot(const Json& report) {
  return report.contains("series") && !report.at("series").empty();
}

/// Log-log line plot of report["series"] = [{"name", "x": [...], "y": [...]}].
/// Non-positive points are dropped.
inline std::string render_svg(const Json& report) {
  constexpr double width = 640, height = 420, left = 70, right = 170, top = 30, bottom = 50;
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : report.at("series")) {
    const auto& xs = s.at("x");
    const auto& ys = s.at("y");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i].get<double>(), y = ys[i].get<double>();
      if (!(x > 0 && y > 0)) continue;
      x0 = std::min(x0, std::log10(x));
      x1 = std::max(x1, std::log10(x));
      y0 = std::min(y0, std::log10(y));
      y1 = std::max(y1, std::log10(y));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double lx) { return left + (lx - x0) / (x1 - x0) * pw; };
  auto sy = [&](double ly) { return top + (1.0 - (ly - y0) / (y1 - y0)) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">"
      << report.value("experiment", std::string()) << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = static_cast<int>(std::ceil(x0)); k <= static_cast<int>(std::floor(x1)); ++k)
    out << "<text x=\"" << number(sx(k), "%.2f") << "\" y=\"" << number(top + ph + 16, "%.2f")
        << "\" text-anchor=\"middle\">1e" << k << "</text>\n";
  for (int k = static_cast<int>(std::ceil(y0)); k <= static_cast<int>(std::floor(y1)); ++k)
    out << "<text x=\"" << left - 6 << "\" y=\"" << number(sy(k) + 4, "%.2f")
        << "\" text-anchor=\"end\">1e" << k << "</text>\n";
  const Json labels = report.value("axes", Json::array({"x", "y"}));
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
      << labels[0].get<std::string>() << " (log)</text>\n";
  out << "<text x=\"14\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 14 "
      << top + ph / 2 << ")\" text-anchor=\"middle\">" << labels[1].get<std::string>()
      << " (log)</text>\n";

  std::size_t index = 0;
  for (const auto& s : report.at("series")) {
    const char* colour = palette[index % (sizeof palette / sizeof *palette)];
    std::string points;
    const auto& xs = s.at("x");
    const auto& ys = s.at("y");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i].get<double>(), y = ys[i].get<double>();
      if (!(x > 0 && y > 0)) continue;
      points += number(sx(std::log10(x)), "%.2f") + "," + number(sy(std::log10(y)), "%.2f") + " ";
    }
    if (!points.empty()) {
      points.pop_back();
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\""
          << points << "\"/>\n";
    }
    const double ly = top + 12 + 16 * static_cast<double>(index);
    out << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 30
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly << "\">"
        << s.at("name").get<std::string>() << "</text>\n";
    ++index;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gradedk::cli
