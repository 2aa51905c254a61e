#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kdereg/rigid_transform.hpp"

namespace kdereg {

/// 16-bit depth raster, row-major. A value of 0 means "no reading".
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> values;
  double depth_scale = 0.001;  // meters per unit

  DepthImage() = default;
  DepthImage(int w, int h, double scale = 0.001)
      : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0),
        depth_scale(scale) {}

  std::uint16_t at(int u, int v) const {
    return values[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(u)];
  }
  std::uint16_t& at(int u, int v) {
    return values[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(u)];
  }

  void validate() const {
    if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw std::invalid_argument("depth buffer size does not match dimensions");
    }
  }
};

/// Instance mask, row-major. 0 is background; any nonzero value is an
/// instance label.
struct MaskImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  MaskImage() = default;
  MaskImage(int w, int h)
      : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

  std::uint8_t at(int u, int v) const {
    return values[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(u)];
  }
  std::uint8_t& at(int u, int v) {
    return values[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(u)];
  }
};

/// Pinhole intrinsics in pixels.
struct Intrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;

  void validate() const {
    if (!(fx > 0) || !(fy > 0)) throw std::invalid_argument("focal lengths must be positive");
  }
};

/// Depth + color camera pair with the extrinsic transform mapping points
/// from the depth frame into the color frame.
struct CameraModel {
  Intrinsics depth_intrinsics;
  Intrinsics color_intrinsics;
  RigidTransform depth_to_color;
  double depth_scale = 0.001;

  void validate() const {
    depth_intrinsics.validate();
    color_intrinsics.validate();
    depth_to_color.validate();
  }
};

}  // namespace kdereg
