#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "kdereg/depth_image.hpp"
#include "kdereg/errors.hpp"
#include "kdereg/rigid_transform.hpp"

namespace kdereg::io {

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline nlohmann::json parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError(path + ": cannot open");
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path + ": " + e.what() + " (byte offset " + std::to_string(e.byte) + ")");
  }
}

inline RigidTransform transform_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 16) {
    throw IoError(path + ": transform must be an array of 16 numbers (row-major 4x4)");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      m(r, c) = j[static_cast<std::size_t>(4 * r + c)].get<double>();
    }
  }
  try {
    return RigidTransform::from_matrix(m);
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace detail

/// A transform on disk is a JSON array of 16 numbers, the 4x4 homogeneous
/// matrix in row-major order, printed with 17 significant digits.
inline std::string transform_to_json_string(const RigidTransform& t) {
  const Eigen::Matrix4d m = t.matrix();
  std::string out = "[";
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (r != 0 || c != 0) out += ", ";
      out += detail::format_double(m(r, c));
    }
  }
  out += "]\n";
  return out;
}

inline void write_transform_json(const std::string& path, const RigidTransform& t) {
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << transform_to_json_string(t);
  if (!os) throw IoError(path + ": write failed");
}

inline RigidTransform read_transform_json(const std::string& path) {
  return detail::transform_from_json(detail::parse_file(path), path);
}

inline Intrinsics intrinsics_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("fx") || !j.contains("fy") || !j.contains("cx") ||
      !j.contains("cy")) {
    throw IoError(path + ": intrinsics need fx, fy, cx, cy");
  }
  Intrinsics intr;
  intr.fx = j["fx"].get<double>();
  intr.fy = j["fy"].get<double>();
  intr.cx = j["cx"].get<double>();
  intr.cy = j["cy"].get<double>();
  return intr;
}

inline CameraModel read_camera_json(const std::string& path) {
  const nlohmann::json j = detail::parse_file(path);
  if (!j.contains("depth_intrinsics") || !j.contains("color_intrinsics") ||
      !j.contains("extrinsics")) {
    throw IoError(path + ": camera model needs depth_intrinsics, color_intrinsics, extrinsics");
  }
  CameraModel cam;
  cam.depth_intrinsics = intrinsics_from_json(j["depth_intrinsics"], path);
  cam.color_intrinsics = intrinsics_from_json(j["color_intrinsics"], path);
  cam.depth_to_color = detail::transform_from_json(j["extrinsics"], path);
  if (j.contains("depth_scale")) cam.depth_scale = j["depth_scale"].get<double>();
  try {
    cam.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ": " + e.what());
  }
  return cam;
}

inline void write_camera_json(const std::string& path, const CameraModel& cam) {
  auto intr = [](const Intrinsics& i) {
    return "{\"fx\": " + detail::format_double(i.fx) + ", \"fy\": " + detail::format_double(i.fy) +
           ", \"cx\": " + detail::format_double(i.cx) + ", \"cy\": " + detail::format_double(i.cy) +
           "}";
  };
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  std::string ext = transform_to_json_string(cam.depth_to_color);
  if (!ext.empty() && ext.back() == '\n') ext.pop_back();
  os << "{\n"
     << "  \"depth_intrinsics\": " << intr(cam.depth_intrinsics) << ",\n"
     << "  \"color_intrinsics\": " << intr(cam.color_intrinsics) << ",\n"
     << "  \"extrinsics\": " << ext << ",\n"
     << "  \"depth_scale\": " << detail::format_double(cam.depth_scale) << "\n"
     << "}\n";
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace kdereg::io
