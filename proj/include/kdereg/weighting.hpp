#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kdereg/bandwidth.hpp"
#include "kdereg/correspondence.hpp"
#include "kdereg/kde.hpp"
#include "kdereg/kdtree.hpp"

namespace kdereg {

/// Neighbor-count initialization: each point's weight is the number of other
/// points within `radius`, plus one so isolated points keep nonzero weight.
inline std::vector<double> init_weights(const std::vector<Point3>& points, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("neighbor radius must be positive");
  if (points.empty()) throw std::invalid_argument("cannot weigh an empty point set");
  KdTree3 tree(points);
  std::vector<double> w(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    w[i] = 1.0 + tree.radius_count(points[i], radius, static_cast<int>(i));
  }
  return w;
}

/// 5% of the bounding-box diagonal; 0 when all points coincide.
inline double default_neighbor_radius(const std::vector<Point3>& points) {
  if (points.empty()) return 0.0;
  Point3 lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return 0.05 * (hi - lo).norm();
}

struct WeightingOptions {
  double radius = 0.0;  // <= 0 selects the bounding-box default
  int grid_size = 1024;
};

struct WeightingResult {
  std::vector<double> weights;
  double radius = 0.0;
  std::array<double, 3> bandwidths{0.0, 0.0, 0.0};
  bool uniform_fallback = false;   // too few points or degenerate product
  bool silverman_fallback = false; // at least one axis used the rule of thumb
  int degenerate_axes = 0;         // axes skipped for having a single value
};

/// Multiplies per-axis density factors into existing weights: for each of
/// x, y, z the points are binned, a bandwidth is selected, the density is
/// evaluated on the grid and interpolated back at each point. The result is
/// normalized to max weight 1.
inline WeightingResult kde_reweight(const std::vector<Point3>& points, std::vector<double> weights,
                                    int grid_size) {
  WeightingResult result;
  const std::size_t m = points.size();
  const int sample_count = static_cast<int>(m);

  // all three axis densities are estimated from the incoming weights; the
  // product is folded in only after every axis has been evaluated. The
  // bandwidth comes from the coordinates alone (unweighted binning), the
  // density from the weighted bins.
  std::vector<double> samples(m);
  const std::vector<double> unit(m, 1.0);
  std::vector<double> factors(m, 1.0);
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < m; ++i) samples[i] = points[i][axis];
    BinnedData binned = linear_bin(samples, weights, grid_size);
    if (binned.degenerate) {
      // constant coordinate: every point sees the same density, so the
      // factor cancels under max-normalization
      ++result.degenerate_axes;
      continue;
    }
    const BandwidthResult bw = isj_bandwidth(linear_bin(samples, unit, grid_size), sample_count);
    result.silverman_fallback = result.silverman_fallback || bw.silverman_fallback;
    result.bandwidths[static_cast<std::size_t>(axis)] = bw.bandwidth;
    const DensityEstimate density = fft_kde(binned, bw.bandwidth, sample_count);
    for (std::size_t i = 0; i < m; ++i) factors[i] *= density.at(samples[i]);
  }
  for (std::size_t i = 0; i < m; ++i) weights[i] *= factors[i];

  double max_w = 0.0;
  for (double w : weights) {
    if (std::isfinite(w)) max_w = std::max(max_w, w);
  }
  if (!(max_w > 0)) {
    result.uniform_fallback = true;
    result.weights.assign(m, 1.0);
    return result;
  }
  for (double& w : weights) w = std::isfinite(w) ? w / max_w : 0.0;
  result.weights = std::move(weights);
  return result;
}

/// Full importance-weighting pass over the current view's points: neighbor
/// counts, then the per-axis density product. Sets below 10 pairs get
/// uniform weights.
inline WeightingResult weigh_correspondences(const CorrespondenceSet& set,
                                             const WeightingOptions& options = {}) {
  const std::size_t m = set.size();
  WeightingResult result;
  if (m < 10) {
    result.uniform_fallback = true;
    result.weights.assign(m, 1.0);
    return result;
  }

  double radius = options.radius;
  if (!(radius > 0)) radius = default_neighbor_radius(set.target);
  if (!(radius > 0)) {
    result.uniform_fallback = true;
    result.weights.assign(m, 1.0);
    return result;
  }

  std::vector<double> init = init_weights(set.target, radius);
  result = kde_reweight(set.target, std::move(init), options.grid_size);
  result.radius = radius;
  return result;
}

}  // namespace kdereg
