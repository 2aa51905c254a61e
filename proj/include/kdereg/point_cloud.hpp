#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kdereg/rigid_transform.hpp"

namespace kdereg {

using Color = std::array<std::uint8_t, 3>;

/// Ordered list of 3D points in meters, optionally colored.
struct PointCloud {
  std::vector<Point3> points;
  std::vector<Color> colors;  // empty, or one entry per point

  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> pts) : points(std::move(pts)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_colors() const { return !colors.empty(); }

  void add(const Point3& p) { points.push_back(p); }
  void add(const Point3& p, const Color& c) {
    points.push_back(p);
    colors.push_back(c);
  }

  void validate() const {
    if (has_colors() && colors.size() != points.size()) {
      throw std::invalid_argument("color count does not match point count");
    }
    for (const auto& p : points) {
      if (!p.allFinite()) throw std::invalid_argument("point cloud contains non-finite point");
    }
  }
};

/// Maps every point p to R*p + t. Colors are carried over unchanged.
inline PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& transform) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(transform.apply(p));
  out.colors = cloud.colors;
  return out;
}

/// Appends src to dst. Colors survive only when every contributing cloud has them.
inline void concatenate(PointCloud& dst, const PointCloud& src) {
  const bool keep_colors = (dst.empty() || dst.has_colors()) && (src.empty() || src.has_colors());
  dst.points.insert(dst.points.end(), src.points.begin(), src.points.end());
  if (keep_colors) {
    dst.colors.insert(dst.colors.end(), src.colors.begin(), src.colors.end());
  } else {
    dst.colors.clear();
  }
}

}  // namespace kdereg
