#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kdereg/errors.hpp"
#include "kdereg/point_cloud.hpp"

namespace kdereg::io {

enum class PlyFormat { kAscii, kBinaryLittleEndian };

namespace detail {

inline int ply_type_size(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32" || type == "float" ||
      type == "float32")
    return 4;
  if (type == "double" || type == "float64") return 8;
  return 0;
}

inline void format_float(std::ostream& os, float v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  os << buf;
}

}  // namespace detail

inline void write_ply(const std::string& path, const PointCloud& cloud,
                      PlyFormat format = PlyFormat::kBinaryLittleEndian) {
  cloud.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");

  os << "ply\n";
  os << (format == PlyFormat::kAscii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n");
  os << "element vertex " << cloud.size() << "\n";
  os << "property float x\nproperty float y\nproperty float z\n";
  if (cloud.has_colors()) {
    os << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  }
  os << "end_header\n";

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const float xyz[3] = {static_cast<float>(cloud.points[i].x()),
                          static_cast<float>(cloud.points[i].y()),
                          static_cast<float>(cloud.points[i].z())};
    if (format == PlyFormat::kAscii) {
      detail::format_float(os, xyz[0]);
      os << ' ';
      detail::format_float(os, xyz[1]);
      os << ' ';
      detail::format_float(os, xyz[2]);
      if (cloud.has_colors()) {
        os << ' ' << static_cast<int>(cloud.colors[i][0]) << ' '
           << static_cast<int>(cloud.colors[i][1]) << ' ' << static_cast<int>(cloud.colors[i][2]);
      }
      os << '\n';
    } else {
      os.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
      if (cloud.has_colors()) {
        os.write(reinterpret_cast<const char*>(cloud.colors[i].data()), 3);
      }
    }
  }
  if (!os) throw IoError(path + ": write failed");
}

inline PointCloud read_ply(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path + ": cannot open");

  auto fail = [&](const std::string& what) -> void {
    throw IoError(path + ": " + what + " (byte offset " +
                  std::to_string(static_cast<long long>(is.tellg())) + ")");
  };

  std::string line;
  if (!std::getline(is, line) || (line != "ply" && line != "ply\r")) fail("not a PLY file");

  struct Property {
    std::string name;
    std::string type;
  };
  PlyFormat format = PlyFormat::kAscii;
  bool format_seen = false;
  std::size_t vertex_count = 0;
  bool in_vertex_element = false;
  bool vertex_seen = false;
  std::vector<Property> vertex_props;

  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    if (token == "comment" || token == "obj_info" || token.empty()) continue;
    if (token == "format") {
      std::string kind, version;
      ls >> kind >> version;
      if (kind == "ascii") {
        format = PlyFormat::kAscii;
      } else if (kind == "binary_little_endian") {
        format = PlyFormat::kBinaryLittleEndian;
      } else {
        fail("unsupported format '" + kind + "'");
      }
      format_seen = true;
    } else if (token == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      if (name == "vertex") {
        vertex_count = count;
        in_vertex_element = true;
        vertex_seen = true;
      } else {
        if (!vertex_seen) fail("element '" + name + "' precedes vertex element");
        in_vertex_element = false;  // trailing elements are ignored
      }
    } else if (token == "property") {
      if (!in_vertex_element) continue;
      std::string type;
      ls >> type;
      if (type == "list") fail("list properties are not supported on vertices");
      Property p;
      p.type = type;
      ls >> p.name;
      if (detail::ply_type_size(type) == 0) fail("unknown property type '" + type + "'");
      vertex_props.push_back(p);
    } else if (token == "end_header") {
      break;
    } else {
      fail("unexpected header token '" + token + "'");
    }
  }
  if (!format_seen || !vertex_seen) fail("incomplete header");

  int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
  for (int i = 0; i < static_cast<int>(vertex_props.size()); ++i) {
    const auto& p = vertex_props[static_cast<std::size_t>(i)];
    if (p.name == "x") ix = i;
    if (p.name == "y") iy = i;
    if (p.name == "z") iz = i;
    if (p.name == "red") ir = i;
    if (p.name == "green") ig = i;
    if (p.name == "blue") ib = i;
  }
  if (ix < 0 || iy < 0 || iz < 0) fail("vertex element lacks x/y/z properties");
  const bool has_color = ir >= 0 && ig >= 0 && ib >= 0;

  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  if (has_color) cloud.colors.reserve(vertex_count);

  if (format == PlyFormat::kAscii) {
    std::vector<double> fields(vertex_props.size());
    for (std::size_t v = 0; v < vertex_count; ++v) {
      for (std::size_t p = 0; p < vertex_props.size(); ++p) {
        if (!(is >> fields[p])) fail("truncated vertex data");
      }
      cloud.points.emplace_back(fields[static_cast<std::size_t>(ix)],
                                fields[static_cast<std::size_t>(iy)],
                                fields[static_cast<std::size_t>(iz)]);
      if (has_color) {
        cloud.colors.push_back({static_cast<std::uint8_t>(fields[static_cast<std::size_t>(ir)]),
                                static_cast<std::uint8_t>(fields[static_cast<std::size_t>(ig)]),
                                static_cast<std::uint8_t>(fields[static_cast<std::size_t>(ib)])});
      }
    }
  } else {
    std::vector<int> offsets(vertex_props.size() + 1, 0);
    for (std::size_t p = 0; p < vertex_props.size(); ++p) {
      offsets[p + 1] = offsets[p] + detail::ply_type_size(vertex_props[p].type);
    }
    const int stride = offsets.back();
    std::vector<char> row(static_cast<std::size_t>(stride));
    auto scalar_at = [&](int prop) -> double {
      const auto& p = vertex_props[static_cast<std::size_t>(prop)];
      const char* src = row.data() + offsets[static_cast<std::size_t>(prop)];
      if (p.type == "float" || p.type == "float32") {
        float f;
        std::memcpy(&f, src, 4);
        return f;
      }
      if (p.type == "double" || p.type == "float64") {
        double d;
        std::memcpy(&d, src, 8);
        return d;
      }
      if (p.type == "uchar" || p.type == "uint8") {
        return static_cast<unsigned char>(*src);
      }
      if (p.type == "ushort" || p.type == "uint16") {
        std::uint16_t u;
        std::memcpy(&u, src, 2);
        return u;
      }
      if (p.type == "int" || p.type == "int32") {
        std::int32_t u;
        std::memcpy(&u, src, 4);
        return u;
      }
      if (p.type == "uint" || p.type == "uint32") {
        std::uint32_t u;
        std::memcpy(&u, src, 4);
        return u;
      }
      if (p.type == "short" || p.type == "int16") {
        std::int16_t u;
        std::memcpy(&u, src, 2);
        return u;
      }
      return static_cast<signed char>(*src);
    };
    for (std::size_t v = 0; v < vertex_count; ++v) {
      if (!is.read(row.data(), stride)) fail("truncated vertex data");
      cloud.points.emplace_back(scalar_at(ix), scalar_at(iy), scalar_at(iz));
      if (has_color) {
        cloud.colors.push_back({static_cast<std::uint8_t>(scalar_at(ir)),
                                static_cast<std::uint8_t>(scalar_at(ig)),
                                static_cast<std::uint8_t>(scalar_at(ib))});
      }
    }
  }
  return cloud;
}

}  // namespace kdereg::io
