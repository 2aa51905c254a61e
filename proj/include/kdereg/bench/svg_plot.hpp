#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "kdereg/bench/sweep.hpp"
#include "kdereg/errors.hpp"

namespace kdereg::bench {

/// RMSE against displacement angle, one line per method, on a log y axis.
inline void write_sweep_svg(const std::string& path, const SweepReport& report) {
  const int width = 640, height = 420;
  const int left = 70, right = 30, top = 40, bottom = 55;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::vector<double> angles;
  std::vector<std::vector<double>> series(3);
  for (const auto& cell : report.cells) {
    angles.push_back(cell.angle);
    series[0].push_back(mean_ignoring_nan(cell.rmse_weighted));
    series[1].push_back(mean_ignoring_nan(cell.rmse_unweighted));
    series[2].push_back(mean_ignoring_nan(cell.rmse_icp));
  }
  if (angles.empty()) throw std::invalid_argument("empty sweep report");

  double y_min = std::numeric_limits<double>::infinity(), y_max = 0.0;
  for (const auto& s : series) {
    for (double v : s) {
      if (std::isfinite(v) && v > 0) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
      }
    }
  }
  if (!(y_max > 0)) {
    y_min = 1e-12;
    y_max = 1.0;
  }
  const double ly_min = std::floor(std::log10(y_min));
  const double ly_max = std::ceil(std::log10(y_max * 1.0001));
  const double x_min = angles.front(), x_max = angles.back();

  auto x_px = [&](double a) { return left + (a - x_min) / (x_max - x_min) * plot_w; };
  auto y_px = [&](double v) {
    const double ly = std::log10(std::max(v, 1e-300));
    return top + (ly_max - ly) / (ly_max - ly_min) * plot_h;
  };

  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
     << "font-family=\"sans-serif\">Alignment RMSE vs displacement angle</text>\n";

  // axes
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << top + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
     << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  for (double a : angles) {
    os << "<line x1=\"" << x_px(a) << "\" y1=\"" << top + plot_h << "\" x2=\"" << x_px(a)
       << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x_px(a) << "\" y=\"" << top + plot_h + 20
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << a
       << "</text>\n";
  }
  for (double ly = ly_min; ly <= ly_max + 1e-9; ly += 1.0) {
    const double v = std::pow(10.0, ly);
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << y_px(v) << "\" x2=\"" << left << "\" y2=\""
       << y_px(v) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << y_px(v) + 4
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">1e" << ly
       << "</text>\n";
  }
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
     << "displacement angle (degrees)</text>\n";
  os << "<text x=\"16\" y=\"" << top + plot_h / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
     << "transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">RMSE (m)</text>\n";

  const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
  const char* labels[3] = {"with KDE", "without KDE", "ICP"};
  for (int s = 0; s < 3; ++s) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[s] << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const double v = series[static_cast<std::size_t>(s)][i];
      if (!std::isfinite(v)) continue;
      os << x_px(angles[i]) << "," << y_px(v) << " ";
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const double v = series[static_cast<std::size_t>(s)][i];
      if (!std::isfinite(v)) continue;
      os << "<circle cx=\"" << x_px(angles[i]) << "\" cy=\"" << y_px(v) << "\" r=\"3\" fill=\""
         << colors[s] << "\"/>\n";
    }
    const double lx = left + plot_w - 130, ly = top + 16 + 18 * s;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly
       << "\" stroke=\"" << colors[s] << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4
       << "\" font-size=\"12\" font-family=\"sans-serif\">" << labels[s] << "</text>\n";
  }
  os << "</svg>\n";
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace kdereg::bench
