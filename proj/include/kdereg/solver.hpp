#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "kdereg/correspondence.hpp"
#include "kdereg/errors.hpp"
#include "kdereg/point_cloud.hpp"

namespace kdereg {

struct AlignmentResult {
  RigidTransform transform;
  double weighted_residual = 0.0;  // objective value at the solution
  double rmse = 0.0;               // unweighted
  int iterations = 0;              // 0 for the closed-form solve
};

/// Closed-form weighted rigid alignment. Computes weighted centroids, the
/// weighted cross-covariance of the centered point sets, and the SVD-based
/// rotation with reflection correction; the returned transform maps source
/// points onto target points and globally minimizes the weighted squared
/// residual for the given weights.
inline AlignmentResult solve_weighted(const CorrespondenceSet& set) {
  set.validate();
  const std::size_t m = set.size();
  if (m < 3) throw DegeneracyError("underdetermined: need at least 3 correspondences");

  double weight_sum = 0.0;
  for (double w : set.weights) weight_sum += w;
  if (!(weight_sum > 0)) throw DegeneracyError("degenerate weights: all zero");

  Point3 centroid_target = Point3::Zero();
  Point3 centroid_source = Point3::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    centroid_target += set.weights[i] * set.target[i];
    centroid_source += set.weights[i] * set.source[i];
  }
  centroid_target /= weight_sum;
  centroid_source /= weight_sum;

  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    covariance += set.weights[i] * (set.target[i] - centroid_target) *
                  (set.source[i] - centroid_source).transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(covariance, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d singular = svd.singularValues();
  if (singular(1) <= 1e-12 * singular(0) || !(singular(0) > 0)) {
    throw DegeneracyError("collinear correspondences: covariance rank below 2");
  }

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant();

  AlignmentResult result;
  result.transform.rotation = svd.matrixU() * d * svd.matrixV().transpose();
  result.transform.translation = centroid_target - result.transform.rotation * centroid_source;

  for (std::size_t i = 0; i < m; ++i) {
    result.weighted_residual +=
        set.weights[i] * (set.target[i] - result.transform.apply(set.source[i])).squaredNorm();
  }
  result.rmse = rmse(set, result.transform);
  return result;
}

/// Concatenates the target cloud with the transformed source cloud.
inline PointCloud align_clouds(const PointCloud& target_cloud, const PointCloud& source_cloud,
                               const RigidTransform& transform) {
  PointCloud merged = target_cloud;
  concatenate(merged, apply_transform(source_cloud, transform));
  return merged;
}

}  // namespace kdereg
