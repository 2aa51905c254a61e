#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "kdereg/bench/synthetic.hpp"
#include "kdereg/errors.hpp"
#include "kdereg/solver.hpp"
#include "kdereg/weighting.hpp"

namespace kdereg::bench {

struct ScalingConfig {
  std::vector<int> m_values = {1000, 2000, 4000, 8000};
  int grid_size = 1024;
  int repetitions = 11;
  std::uint64_t seed = 7;
};

struct ScalingRow {
  int m = 0;
  double init_ms = 0.0;   // neighbor-count initialization
  double kde_ms = 0.0;    // post-init weighting: binning + bandwidth + FFT + update
  double solve_ms = 0.0;  // closed-form weighted solve
};

struct ScalingReport {
  ScalingConfig config;
  std::vector<ScalingRow> rows;
  double kde_slope = 0.0;    // log-log slope of kde_ms against m
  double solve_slope = 0.0;  // log-log slope of solve_ms against m
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double loglog_slope(const std::vector<int>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(static_cast<double>(x[i]));
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Wall-time medians of the weighting and solving stages as the pair count
/// grows. Runs are strictly sequential; each measurement is the median over
/// `repetitions` calls.
inline ScalingReport run_scaling_benchmark(const ScalingConfig& config) {
  using clock = std::chrono::steady_clock;
  if (config.m_values.empty() || !std::is_sorted(config.m_values.begin(), config.m_values.end())) {
    throw std::invalid_argument("m values must be ascending");
  }
  if (config.repetitions < 1) throw std::invalid_argument("need at least one repetition");

  ScalingReport report;
  report.config = config;

  for (int m : config.m_values) {
    SceneParams params;
    params.n_objects = 4;
    params.points_per_object = std::max(1, m / 4);
    params.angle_deg = 20.0;
    params.noise_sigma = 0.003;
    params.seed = config.seed;
    const SyntheticScene scene = generate_scene(params);
    const double radius = default_neighbor_radius(scene.correspondences.target);

    std::vector<double> t_init, t_kde, t_solve;
    CorrespondenceSet set = scene.correspondences;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const auto t0 = clock::now();
      std::vector<double> init = init_weights(set.target, radius);
      const auto t1 = clock::now();
      const WeightingResult wr = kde_reweight(set.target, std::move(init), config.grid_size);
      const auto t2 = clock::now();
      set.weights = wr.weights;
      const AlignmentResult aligned = solve_weighted(set);
      const auto t3 = clock::now();
      (void)aligned;
      t_init.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      t_kde.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
      t_solve.push_back(std::chrono::duration<double, std::milli>(t3 - t2).count());
    }
    report.rows.push_back(
        {m, detail::median(t_init), detail::median(t_kde), detail::median(t_solve)});
  }

  std::vector<double> kde_ms, solve_ms;
  for (const auto& row : report.rows) {
    kde_ms.push_back(row.kde_ms);
    solve_ms.push_back(row.solve_ms);
  }
  if (report.rows.size() >= 2) {
    report.kde_slope = detail::loglog_slope(config.m_values, kde_ms);
    report.solve_slope = detail::loglog_slope(config.m_values, solve_ms);
  }
  return report;
}

inline void write_scaling_csv(const std::string& path, const ScalingReport& report) {
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "m,init_ms,kde_ms,solve_ms\n";
  char buf[200];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", row.m, row.init_ms, row.kde_ms,
                  row.solve_ms);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "# kde_slope=%.6g solve_slope=%.6g\n", report.kde_slope,
                report.solve_slope);
  os << buf;
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace kdereg::bench
