#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "bbq/errors.hpp"
#include "bbq/sweep.hpp"

namespace bbq {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const SweepResult& result, const std::vector<std::string>& columns,
                    const std::string& path) {
  if (result.rows.size() < 2) throw config_error("write_svg_plot: need at least 2 grid points");
  if (columns.empty()) throw config_error("write_svg_plot: no columns selected");

  const double width = 960, height = 560;
  const double ml = 70, mr = 20, mt = 20, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;

  const double x0 = result.rows.front().theta_over_pi;
  const double x1 = result.rows.back().theta_over_pi;
  double y0 = 0.0, y1 = -1e300;
  std::vector<std::vector<double>> series;
  for (const std::string& c : columns) {
    series.push_back(result.column(c));
    for (double v : series.back()) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (y1 <= y0) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width, 0) + "\" height=\"" +
         num(height, 0) + "\" viewBox=\"0 0 " + num(width, 0) + " " + num(height, 0) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // frame and ticks
  svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const int nticks = 8;
  for (int i = 0; i <= nticks; ++i) {
    const double x = x0 + (x1 - x0) * i / nticks;
    svg += "<line x1=\"" + num(px(x)) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(px(x)) +
           "\" y2=\"" + num(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(px(x)) + "\" y=\"" + num(mt + ph + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + label(x) + "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double y = y0 + (y1 - y0) * i / 5;
    svg += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(py(y)) + "\" x2=\"" + num(ml) +
           "\" y2=\"" + num(py(y)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(py(y) + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + label(y) + "</text>\n";
  }
  svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 12) +
         "\" font-size=\"14\" text-anchor=\"middle\">theta / pi</text>\n";

  // transition markers under the curves
  for (std::size_t ci = 0; ci < columns.size(); ++ci) {
    const auto it = result.transitions.find(columns[ci]);
    if (it == result.transitions.end()) continue;
    const char* color = kPalette[ci % 8];
    for (const TransitionFlag& f : it->second) {
      svg += "<line x1=\"" + num(px(f.theta_over_pi)) + "\" y1=\"" + num(mt) + "\" x2=\"" +
             num(px(f.theta_over_pi)) + "\" y2=\"" + num(mt + ph) + "\" stroke=\"" + color +
             "\" stroke-dasharray=\"4,4\" opacity=\"0.6\"/>\n";
    }
  }

  for (std::size_t ci = 0; ci < columns.size(); ++ci) {
    const char* color = kPalette[ci % 8];
    std::string pts;
    for (std::size_t k = 0; k < result.rows.size(); ++k) {
      pts += num(px(result.rows[k].theta_over_pi)) + "," + num(py(series[ci][k]));
      if (k + 1 < result.rows.size()) pts += " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }

  // legend
  for (std::size_t ci = 0; ci < columns.size(); ++ci) {
    const double ly = mt + 16 + 18 * static_cast<double>(ci);
    svg += "<line x1=\"" + num(ml + pw - 150) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(ml + pw - 120) + "\" y2=\"" + num(ly) + "\" stroke=\"" + kPalette[ci % 8] +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(ml + pw - 114) + "\" y=\"" + num(ly + 4) + "\" font-size=\"12\">" +
           columns[ci] + "</text>\n";
  }
  svg += "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("write_svg_plot: cannot open " + path);
  f.write(svg.data(), static_cast<std::streamsize>(svg.size()));
  if (!f) throw config_error("write_svg_plot: write failed for " + path);
}

}  // namespace bbq
