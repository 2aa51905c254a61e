#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "kdereg/correspondence.hpp"
#include "kdereg/point_cloud.hpp"
#include "kdereg/rigid_transform.hpp"

namespace kdereg::bench {

struct SceneParams {
  int n_objects = 4;
  int points_per_object = 50;
  double angle_deg = 0.0;        // camera displacement about the vertical axis
  double distance = 2.0;         // camera-to-scene distance in meters
  double noise_sigma = 0.0;      // isotropic Gaussian noise on target points
  double outlier_fraction = 0.0; // fraction of pairs replaced by mismatches
  bool partial_overlap = false;  // occlude part of one cluster as the angle widens
  std::uint64_t seed = 0;
};

/// A seeded scene of clustered correspondences with a known view-change
/// transform. Outlier pairs are marked so evaluation can segregate them.
struct SyntheticScene {
  RigidTransform ground_truth;
  CorrespondenceSet correspondences;
  std::vector<bool> outlier_mask;  // one flag per pair
  std::vector<int> object_id;      // cluster each pair came from
  PointCloud source_view;          // every keypoint seen in the previous view
  PointCloud target_view;          // every keypoint seen in the current view
  double noise_sigma = 0.0;
  double outlier_fraction = 0.0;
  std::uint64_t seed = 0;

  CorrespondenceSet clean_pairs() const {
    CorrespondenceSet out;
    for (std::size_t i = 0; i < correspondences.size(); ++i) {
      if (!outlier_mask[i]) {
        out.add(correspondences.source[i], correspondences.target[i]);
      }
    }
    return out;
  }
};

/// RMSE over the genuine (non-outlier) pairs under a candidate transform.
inline double clean_pair_rmse(const SyntheticScene& scene, const RigidTransform& transform) {
  return rmse(scene.clean_pairs(), transform);
}

/// Builds clustered object point sets around a scene center `distance`
/// meters in front of the camera, rotates the view about the vertical axis
/// through that center, perturbs target points with Gaussian noise, and
/// replaces a fraction of pairs with uniform mismatches inside the target
/// bounding box. Base random draws do not depend on the angle, so scenes
/// sharing a seed are paired across angles. With partial overlap enabled, a
/// nested prefix of one cluster's genuine pairs loses its true match as the
/// angle widens: the occluded points are still detected in the previous
/// view, so their correspondences turn into mismatches instead of
/// disappearing.
inline SyntheticScene generate_scene(const SceneParams& params) {
  if (params.n_objects < 1 || params.points_per_object < 1) {
    throw std::invalid_argument("scene needs at least one object and one point");
  }
  if (params.outlier_fraction < 0.0 || params.outlier_fraction >= 1.0) {
    throw std::invalid_argument("outlier fraction must lie in [0, 1)");
  }
  if (!(params.distance > 0)) throw std::invalid_argument("distance must be positive");

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const Point3 scene_center(0.0, 0.0, params.distance);
  const int m = params.n_objects * params.points_per_object;

  // cluster centers at room scale (a table, a chair, a bag), then points
  // around them
  std::vector<Point3> centers(static_cast<std::size_t>(params.n_objects));
  for (auto& c : centers) {
    c = scene_center + Point3(3.2 * (unit(rng) - 0.5), 0.8 * (unit(rng) - 0.5),
                              2.0 * (unit(rng) - 0.5));
  }
  constexpr double kClusterSigma = 0.05;
  std::vector<Point3> source(static_cast<std::size_t>(m));
  std::vector<int> object_id(static_cast<std::size_t>(m));
  for (int obj = 0; obj < params.n_objects; ++obj) {
    for (int k = 0; k < params.points_per_object; ++k) {
      const int i = obj * params.points_per_object + k;
      source[static_cast<std::size_t>(i)] =
          centers[static_cast<std::size_t>(obj)] +
          kClusterSigma * Point3(gauss(rng), gauss(rng), gauss(rng));
      object_id[static_cast<std::size_t>(i)] = obj;
    }
  }

  // noise draws happen for every pair so the stream is angle-independent
  std::vector<Point3> noise(static_cast<std::size_t>(m));
  for (auto& n : noise) n = Point3(gauss(rng), gauss(rng), gauss(rng));

  const double theta = params.angle_deg * M_PI / 180.0;
  RigidTransform gt;
  gt.rotation = Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitY()).toRotationMatrix();
  gt.translation = scene_center - gt.rotation * scene_center;

  std::vector<Point3> target(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    target[static_cast<std::size_t>(i)] = gt.apply(source[static_cast<std::size_t>(i)]) +
                                          params.noise_sigma * noise[static_cast<std::size_t>(i)];
  }

  // bounding box of the unperturbed target view, reused for all mismatches
  Point3 lo = target.front(), hi = target.front();
  for (const auto& p : target) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::vector<bool> outlier_mask(static_cast<std::size_t>(m), false);
  auto make_mismatch = [&](int i) {
    outlier_mask[static_cast<std::size_t>(i)] = true;
    for (int axis = 0; axis < 3; ++axis) {
      target[static_cast<std::size_t>(i)][axis] = lo[axis] + unit(rng) * (hi[axis] - lo[axis]);
    }
  };

  // outlier pairs: the target side becomes a uniform point in the target box
  const int n_outliers = static_cast<int>(std::lround(params.outlier_fraction * m));
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 0; k < n_outliers; ++k) make_mismatch(order[static_cast<std::size_t>(k)]);

  // occlusion: as the angle widens, a nested prefix of cluster 0's genuine
  // pairs loses its true match (the whole object at 45 degrees and beyond);
  // those features still fire in the previous view, so the matcher pairs
  // them with spurious points instead of dropping them
  if (params.partial_overlap) {
    const double occluded_fraction = std::min(1.0, 2.0 * std::abs(params.angle_deg) / 90.0);
    const int occluded_count =
        static_cast<int>(std::floor(occluded_fraction * params.points_per_object));
    int converted = 0;
    for (int i = 0; i < params.points_per_object && converted < occluded_count; ++i) {
      if (outlier_mask[static_cast<std::size_t>(i)]) continue;
      make_mismatch(i);
      ++converted;
    }
  }

  SyntheticScene scene;
  scene.ground_truth = gt;
  scene.noise_sigma = params.noise_sigma;
  scene.outlier_fraction = params.outlier_fraction;
  scene.seed = params.seed;
  for (int i = 0; i < m; ++i) {
    scene.source_view.add(source[static_cast<std::size_t>(i)]);
    scene.target_view.add(target[static_cast<std::size_t>(i)]);
    scene.correspondences.add(source[static_cast<std::size_t>(i)],
                              target[static_cast<std::size_t>(i)]);
    scene.outlier_mask.push_back(outlier_mask[static_cast<std::size_t>(i)]);
    scene.object_id.push_back(object_id[static_cast<std::size_t>(i)]);
  }
  return scene;
}

}  // namespace kdereg::bench
