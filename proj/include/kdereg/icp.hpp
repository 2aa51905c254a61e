#pragma once

#include <cmath>
#include <limits>

#include "kdereg/kdtree.hpp"
#include "kdereg/solver.hpp"

namespace kdereg {

struct IcpOptions {
  int max_iterations = 50;
  double tolerance = 1e-6;  // stop when the RMSE improvement drops below this
  RigidTransform init;
};

/// Point-to-point iterative closest point: alternates nearest-neighbor
/// matching against the target with a uniform-weight closed-form solve.
/// Nearest-neighbor ties resolve to the lowest target index.
inline AlignmentResult icp_point_to_point(const PointCloud& source, const PointCloud& target,
                                          const IcpOptions& options = {}) {
  if (source.size() < 3 || target.size() < 3) {
    throw DegeneracyError("icp needs at least 3 points in both clouds");
  }
  KdTree3 tree(target.points);

  AlignmentResult result;
  result.transform = options.init;
  double previous_rmse = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    CorrespondenceSet matches;
    matches.source.reserve(source.size());
    matches.target.reserve(source.size());
    for (const auto& p : source.points) {
      const int j = tree.nearest(result.transform.apply(p));
      matches.add(p, target.points[static_cast<std::size_t>(j)]);
    }
    const AlignmentResult step = solve_weighted(matches);
    result.transform = step.transform;
    result.weighted_residual = step.weighted_residual;
    result.rmse = step.rmse;
    result.iterations = iter;
    if (result.rmse < options.tolerance || previous_rmse - result.rmse < options.tolerance) break;
    previous_rmse = result.rmse;
  }
  return result;
}

}  // namespace kdereg
