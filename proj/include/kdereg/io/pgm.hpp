#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <string>

#include "kdereg/depth_image.hpp"
#include "kdereg/errors.hpp"

namespace kdereg::io {

namespace detail {

/// Reads the next header integer, skipping whitespace and '#' comments.
inline long pgm_header_int(std::istream& is, const std::string& path) {
  int c = is.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = is.get();
    } else if (std::isspace(c)) {
      c = is.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) {
    throw IoError(path + ": malformed PGM header (byte offset " +
                  std::to_string(static_cast<long long>(is.tellg())) + ")");
  }
  long value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    c = is.get();
  }
  return value;
}

struct PgmHeader {
  int width = 0, height = 0;
  long maxval = 0;
};

inline PgmHeader read_pgm_header(std::istream& is, const std::string& path) {
  char magic[2] = {0, 0};
  is.read(magic, 2);
  if (!is || magic[0] != 'P' || magic[1] != '5') {
    throw IoError(path + ": not a binary PGM (P5) file");
  }
  PgmHeader h;
  h.width = static_cast<int>(pgm_header_int(is, path));
  h.height = static_cast<int>(pgm_header_int(is, path));
  h.maxval = pgm_header_int(is, path);
  // the integer scan consumed the single whitespace after maxval, so the
  // stream now sits exactly at the raster
  if (h.width <= 0 || h.height <= 0) throw IoError(path + ": invalid PGM dimensions");
  return h;
}

}  // namespace detail

/// 16-bit binary PGM, most significant byte first per the format.
inline DepthImage read_pgm16(const std::string& path, double depth_scale = 0.001) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path + ": cannot open");
  const auto h = detail::read_pgm_header(is, path);
  if (h.maxval <= 255 || h.maxval > 65535) {
    throw IoError(path + ": expected a 16-bit PGM (maxval in 256..65535)");
  }
  DepthImage img(h.width, h.height, depth_scale);
  const std::size_t n = img.values.size();
  std::vector<unsigned char> raw(n * 2);
  if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    throw IoError(path + ": truncated raster (byte offset " +
                  std::to_string(static_cast<long long>(is.tellg())) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    img.values[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
  }
  return img;
}

inline void write_pgm16(const std::string& path, const DepthImage& img) {
  img.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "P5\n" << img.width << " " << img.height << "\n65535\n";
  for (std::uint16_t v : img.values) {
    const unsigned char bytes[2] = {static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v & 0xff)};
    os.write(reinterpret_cast<const char*>(bytes), 2);
  }
  if (!os) throw IoError(path + ": write failed");
}

/// 8-bit binary PGM used for instance masks.
inline MaskImage read_pgm8(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path + ": cannot open");
  const auto h = detail::read_pgm_header(is, path);
  if (h.maxval > 255) throw IoError(path + ": expected an 8-bit PGM (maxval <= 255)");
  MaskImage img(h.width, h.height);
  if (!is.read(reinterpret_cast<char*>(img.values.data()),
               static_cast<std::streamsize>(img.values.size()))) {
    throw IoError(path + ": truncated raster (byte offset " +
                  std::to_string(static_cast<long long>(is.tellg())) + ")");
  }
  return img;
}

inline void write_pgm8(const std::string& path, const MaskImage& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "P5\n" << img.width << " " << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.values.data()),
           static_cast<std::streamsize>(img.values.size()));
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace kdereg::io
