#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "kdereg/bench/synthetic.hpp"
#include "kdereg/errors.hpp"
#include "kdereg/icp.hpp"
#include "kdereg/solver.hpp"
#include "kdereg/weighting.hpp"

namespace kdereg::bench {

struct SweepConfig {
  std::vector<double> angles = {0.0, 10.0, 20.0, 30.0, 45.0};  // magnitudes, expanded to +/-
  int seeds = 20;
  double noise_sigma = 0.003;
  double outlier_fraction = 0.1;
  int n_objects = 4;
  int points_per_object = 50;
  double distance = 2.0;
  bool partial_overlap = true;
  std::uint64_t base_seed = 7;
  WeightingOptions weighting;
};

/// Per-angle results: one RMSE per seed per method, NaN marking a cell whose
/// solve failed, plus mean per-stage runtimes in milliseconds.
struct SweepCell {
  double angle = 0.0;
  std::vector<double> rmse_weighted;
  std::vector<double> rmse_unweighted;
  std::vector<double> rmse_icp;
  double weigh_ms = 0.0;
  double solve_ms = 0.0;
  double icp_ms = 0.0;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepCell> cells;  // ordered by signed angle
};

inline double mean_ignoring_nan(const std::vector<double>& v) {
  double s = 0.0;
  int n = 0;
  for (double x : v) {
    if (std::isfinite(x)) {
      s += x;
      ++n;
    }
  }
  return n > 0 ? s / n : std::numeric_limits<double>::quiet_NaN();
}

inline double stddev_ignoring_nan(const std::vector<double>& v) {
  const double mu = mean_ignoring_nan(v);
  double s = 0.0;
  int n = 0;
  for (double x : v) {
    if (std::isfinite(x)) {
      s += (x - mu) * (x - mu);
      ++n;
    }
  }
  return n > 1 ? std::sqrt(s / (n - 1)) : 0.0;
}

/// Signed angle set: every nonzero magnitude appears with both signs.
inline std::vector<double> expand_angles(const std::vector<double>& magnitudes) {
  std::set<double> angles;
  for (double a : magnitudes) {
    angles.insert(a);
    angles.insert(-a);
  }
  return {angles.begin(), angles.end()};
}

/// Runs the three methods over every (angle, seed) cell: the KDE-weighted
/// closed-form solve, the uniform-weight solve, and point-to-point ICP from
/// identity. Cells where a solver reports degeneracy record NaN and the
/// sweep continues.
inline SweepReport run_angle_sweep(const SweepConfig& config) {
  using clock = std::chrono::steady_clock;
  SweepReport report;
  report.config = config;

  for (double angle : expand_angles(config.angles)) {
    SweepCell cell;
    cell.angle = angle;
    double weigh_total = 0.0, solve_total = 0.0, icp_total = 0.0;
    for (int s = 0; s < config.seeds; ++s) {
      SceneParams params;
      params.n_objects = config.n_objects;
      params.points_per_object = config.points_per_object;
      params.angle_deg = angle;
      params.distance = config.distance;
      params.noise_sigma = config.noise_sigma;
      params.outlier_fraction = config.outlier_fraction;
      params.partial_overlap = config.partial_overlap;
      params.seed = config.base_seed + static_cast<std::uint64_t>(s);
      const SyntheticScene scene = generate_scene(params);

      CorrespondenceSet set = scene.correspondences;

      // (a) KDE-weighted
      double rmse_w = std::numeric_limits<double>::quiet_NaN();
      try {
        const auto t0 = clock::now();
        const WeightingResult wr = weigh_correspondences(set, config.weighting);
        const auto t1 = clock::now();
        set.weights = wr.weights;
        const AlignmentResult aligned = solve_weighted(set);
        const auto t2 = clock::now();
        weigh_total += std::chrono::duration<double, std::milli>(t1 - t0).count();
        solve_total += std::chrono::duration<double, std::milli>(t2 - t1).count();
        rmse_w = clean_pair_rmse(scene, aligned.transform);
      } catch (const DegeneracyError&) {
      }
      cell.rmse_weighted.push_back(rmse_w);

      // (b) uniform weights
      double rmse_u = std::numeric_limits<double>::quiet_NaN();
      try {
        set.set_uniform_weights();
        const AlignmentResult aligned = solve_weighted(set);
        rmse_u = clean_pair_rmse(scene, aligned.transform);
      } catch (const DegeneracyError&) {
      }
      cell.rmse_unweighted.push_back(rmse_u);

      // (c) ICP from identity on the per-view keypoint clouds
      double rmse_i = std::numeric_limits<double>::quiet_NaN();
      try {
        const auto t0 = clock::now();
        const AlignmentResult aligned = icp_point_to_point(scene.source_view, scene.target_view);
        const auto t1 = clock::now();
        icp_total += std::chrono::duration<double, std::milli>(t1 - t0).count();
        rmse_i = clean_pair_rmse(scene, aligned.transform);
      } catch (const DegeneracyError&) {
      }
      cell.rmse_icp.push_back(rmse_i);
    }
    cell.weigh_ms = weigh_total / config.seeds;
    cell.solve_ms = solve_total / config.seeds;
    cell.icp_ms = icp_total / config.seeds;
    report.cells.push_back(std::move(cell));
  }
  return report;
}

inline void write_sweep_csv(const std::string& path, const SweepReport& report) {
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "angle_deg,rmse_weighted_mean,rmse_weighted_std,rmse_unweighted_mean,"
        "rmse_unweighted_std,rmse_icp_mean,rmse_icp_std,weigh_ms,solve_ms,icp_ms\n";
  char buf[400];
  for (const auto& cell : report.cells) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  cell.angle, mean_ignoring_nan(cell.rmse_weighted),
                  stddev_ignoring_nan(cell.rmse_weighted), mean_ignoring_nan(cell.rmse_unweighted),
                  stddev_ignoring_nan(cell.rmse_unweighted), mean_ignoring_nan(cell.rmse_icp),
                  stddev_ignoring_nan(cell.rmse_icp), cell.weigh_ms, cell.solve_ms, cell.icp_ms);
    os << buf;
  }
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace kdereg::bench
