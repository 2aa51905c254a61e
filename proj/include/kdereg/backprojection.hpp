#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "kdereg/depth_image.hpp"
#include "kdereg/kdtree.hpp"
#include "kdereg/point_cloud.hpp"

namespace kdereg {

/// Fills zero-valued pixels from their 8-neighborhood, taking the minimum
/// (closest to camera) nonzero neighbor, iterated until no fillable hole
/// remains. Each pass reads only the previous pass's image, so the result is
/// independent of scan order. An all-zero image is returned unchanged and
/// reported through `all_zero`.
inline DepthImage fill_holes(const DepthImage& depth, bool* all_zero = nullptr) {
  depth.validate();
  if (all_zero) *all_zero = false;
  const bool any_nonzero =
      std::any_of(depth.values.begin(), depth.values.end(), [](std::uint16_t v) { return v != 0; });
  if (!any_nonzero) {
    if (all_zero) *all_zero = true;
    return depth;
  }

  DepthImage cur = depth;
  DepthImage next = depth;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < cur.height; ++v) {
      for (int u = 0; u < cur.width; ++u) {
        if (cur.at(u, v) != 0) continue;
        std::uint16_t best = 0;
        for (int dv = -1; dv <= 1; ++dv) {
          for (int du = -1; du <= 1; ++du) {
            if (du == 0 && dv == 0) continue;
            const int nu = u + du, nv = v + dv;
            if (nu < 0 || nu >= cur.width || nv < 0 || nv >= cur.height) continue;
            const std::uint16_t n = cur.at(nu, nv);
            if (n != 0 && (best == 0 || n < best)) best = n;
          }
        }
        if (best != 0) {
          next.at(u, v) = best;
          changed = true;
        }
      }
    }
    std::swap(cur.values, next.values);
    next.values = cur.values;
  }
  return cur;
}

/// Reprojects a (hole-filled) depth image into the color camera's raster.
/// Pixels are lifted through the depth intrinsics, moved by the extrinsic
/// transform, and projected through the color intrinsics. Collisions keep the
/// smaller depth; unmapped pixels stay 0.
inline DepthImage align_depth_to_color(const DepthImage& depth, const CameraModel& camera,
                                       int color_width, int color_height) {
  depth.validate();
  if (!(camera.depth_intrinsics.fx > 0) || !(camera.depth_intrinsics.fy > 0) ||
      !(camera.color_intrinsics.fx > 0) || !(camera.color_intrinsics.fy > 0)) {
    throw std::invalid_argument("camera focal lengths must be nonzero");
  }
  const Intrinsics& di = camera.depth_intrinsics;
  const Intrinsics& ci = camera.color_intrinsics;
  DepthImage out(color_width, color_height, depth.depth_scale);
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      const std::uint16_t raw = depth.at(u, v);
      if (raw == 0) continue;
      const double z = raw * depth.depth_scale;
      const Point3 p_depth((u - di.cx) * z / di.fx, (v - di.cy) * z / di.fy, z);
      const Point3 p_color = camera.depth_to_color.apply(p_depth);
      if (!(p_color.z() > 0)) continue;
      const long uc = std::lround(ci.fx * p_color.x() / p_color.z() + ci.cx);
      const long vc = std::lround(ci.fy * p_color.y() / p_color.z() + ci.cy);
      if (uc < 0 || uc >= color_width || vc < 0 || vc >= color_height) continue;
      const long mapped = std::lround(p_color.z() / out.depth_scale);
      if (mapped <= 0 || mapped > 65535) continue;
      std::uint16_t& cell = out.at(static_cast<int>(uc), static_cast<int>(vc));
      if (cell == 0 || mapped < cell) cell = static_cast<std::uint16_t>(mapped);
    }
  }
  return out;
}

/// Zeroes depth outside the mask; inside-mask pixels are copied verbatim.
inline DepthImage rectify_with_mask(const DepthImage& aligned, const MaskImage& mask) {
  if (aligned.width != mask.width || aligned.height != mask.height) {
    throw std::invalid_argument("mask dimensions do not match depth image");
  }
  DepthImage out = aligned;
  const std::size_t n = out.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.values[i] == 0) out.values[i] = 0;
  }
  return out;
}

/// Lifts every nonzero pixel to a 3D point, raster scan order:
/// z = scale * value, x = (u - cx) * z / fx, y = (v - cy) * z / fy.
inline PointCloud backproject(const DepthImage& masked, const Intrinsics& intr) {
  masked.validate();
  intr.validate();
  PointCloud cloud;
  for (int v = 0; v < masked.height; ++v) {
    for (int u = 0; u < masked.width; ++u) {
      const std::uint16_t raw = masked.at(u, v);
      if (raw == 0) continue;
      const double z = raw * masked.depth_scale;
      cloud.add(Point3((u - intr.cx) * z / intr.fx, (v - intr.cy) * z / intr.fy, z));
    }
  }
  return cloud;
}

/// The masked raster lives in the color frame, so the color intrinsics apply.
inline PointCloud backproject(const DepthImage& masked, const CameraModel& camera) {
  return backproject(masked, camera.color_intrinsics);
}

/// One cloud per instance label, each in raster scan order.
inline std::map<std::uint8_t, PointCloud> backproject_instances(const DepthImage& masked,
                                                                const MaskImage& mask,
                                                                const Intrinsics& intr) {
  if (masked.width != mask.width || masked.height != mask.height) {
    throw std::invalid_argument("mask dimensions do not match depth image");
  }
  intr.validate();
  std::map<std::uint8_t, PointCloud> out;
  for (int v = 0; v < masked.height; ++v) {
    for (int u = 0; u < masked.width; ++u) {
      const std::uint16_t raw = masked.at(u, v);
      const std::uint8_t label = mask.at(u, v);
      if (raw == 0 || label == 0) continue;
      const double z = raw * masked.depth_scale;
      out[label].add(Point3((u - intr.cx) * z / intr.fx, (v - intr.cy) * z / intr.fy, z));
    }
  }
  return out;
}

/// Inverse of backproject: rasterizes points with z > 0 into a depth image.
/// Collisions keep the nearer point. Points off the raster or closer than
/// half a depth unit are dropped.
inline DepthImage project(const PointCloud& cloud, const Intrinsics& intr, int width, int height,
                          double depth_scale = 0.001) {
  intr.validate();
  DepthImage out(width, height, depth_scale);
  for (const auto& p : cloud.points) {
    if (!(p.z() > 0)) continue;
    const long u = std::lround(intr.fx * p.x() / p.z() + intr.cx);
    const long v = std::lround(intr.fy * p.y() / p.z() + intr.cy);
    if (u < 0 || u >= width || v < 0 || v >= height) continue;
    const long value = std::lround(p.z() / depth_scale);
    if (value <= 0 || value > 65535) continue;
    std::uint16_t& cell = out.at(static_cast<int>(u), static_cast<int>(v));
    if (cell == 0 || value < cell) cell = static_cast<std::uint16_t>(value);
  }
  return out;
}

/// Statistical outlier removal: drops points whose mean distance to their k
/// nearest neighbors exceeds mean + sigma_mult * stddev of that statistic.
/// Survivor order is preserved. Clouds with <= k points pass through.
inline PointCloud remove_outliers(const PointCloud& cloud, int k = 20, double sigma_mult = 2.0) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const std::size_t n = cloud.size();
  if (n <= static_cast<std::size_t>(k)) return cloud;

  KdTree3 tree(cloud.points);
  std::vector<double> mean_dist(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto dists = tree.knn_distances(cloud.points[i], k, static_cast<int>(i));
    double s = 0.0;
    for (double d : dists) s += d;
    mean_dist[i] = s / static_cast<double>(dists.size());
  }
  double mean = 0.0;
  for (double d : mean_dist) mean += d;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double d : mean_dist) var += (d - mean) * (d - mean);
  var /= static_cast<double>(n - 1);
  const double threshold = mean + sigma_mult * std::sqrt(var);

  PointCloud out;
  for (std::size_t i = 0; i < n; ++i) {
    if (mean_dist[i] <= threshold) {
      if (cloud.has_colors()) {
        out.add(cloud.points[i], cloud.colors[i]);
      } else {
        out.add(cloud.points[i]);
      }
    }
  }
  return out;
}

}  // namespace kdereg
