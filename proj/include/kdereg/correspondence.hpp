#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kdereg/rigid_transform.hpp"

namespace kdereg {

/// Paired 3D points from two views plus a per-pair weight. source holds the
/// previous view's points, target the current view's; the solved transform
/// maps source onto target.
struct CorrespondenceSet {
  std::vector<Point3> source;
  std::vector<Point3> target;
  std::vector<double> weights;

  std::size_t size() const { return source.size(); }
  bool empty() const { return source.empty(); }

  void add(const Point3& src, const Point3& tgt, double w = 1.0) {
    source.push_back(src);
    target.push_back(tgt);
    weights.push_back(w);
  }

  void set_uniform_weights() { weights.assign(source.size(), 1.0); }

  void validate() const {
    if (source.size() != target.size() || source.size() != weights.size()) {
      throw std::invalid_argument("correspondence lists must have equal length");
    }
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("correspondence weights must be finite and non-negative");
      }
    }
  }
};

/// Unweighted root mean squared residual of target_i - (R*source_i + t).
inline double rmse(const CorrespondenceSet& set, const RigidTransform& transform) {
  if (set.empty()) throw std::invalid_argument("rmse of an empty correspondence set");
  double sum = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    sum += (set.target[i] - transform.apply(set.source[i])).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(set.size()));
}

}  // namespace kdereg
