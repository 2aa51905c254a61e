#pragma once

#include <png.h>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "kdereg/depth_image.hpp"
#include "kdereg/errors.hpp"

namespace kdereg::io {

namespace detail {

struct PngGray {
  int width = 0, height = 0, bit_depth = 0;
  std::vector<std::uint16_t> samples;  // widened to 16 bits
};

inline PngGray read_png_gray(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw IoError(path + ": cannot open");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError(path + ": libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError(path + ": PNG decode failed");
  }

  png_init_io(png, fp);
  png_read_png(png, info, PNG_TRANSFORM_SWAP_ENDIAN | PNG_TRANSFORM_STRIP_ALPHA, nullptr);

  PngGray out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type != PNG_COLOR_TYPE_GRAY || (out.bit_depth != 8 && out.bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError(path + ": expected an 8- or 16-bit grayscale PNG");
  }

  png_bytepp rows = png_get_rows(png, info);
  out.samples.resize(static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height));
  for (int v = 0; v < out.height; ++v) {
    if (out.bit_depth == 16) {
      // after SWAP_ENDIAN the row bytes are least significant first
      for (int u = 0; u < out.width; ++u) {
        out.samples[static_cast<std::size_t>(v) * out.width + u] = static_cast<std::uint16_t>(
            rows[v][2 * u] | (static_cast<std::uint16_t>(rows[v][2 * u + 1]) << 8));
      }
    } else {
      for (int u = 0; u < out.width; ++u) {
        out.samples[static_cast<std::size_t>(v) * out.width + u] = rows[v][u];
      }
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return out;
}

inline void write_png_gray(const std::string& path, int width, int height, int bit_depth,
                           const std::uint8_t* bytes) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw IoError(path + ": cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError(path + ": libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError(path + ": PNG encode failed");
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  const std::size_t stride = static_cast<std::size_t>(width) * (bit_depth == 16 ? 2 : 1);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int v = 0; v < height; ++v) {
    rows[static_cast<std::size_t>(v)] = const_cast<png_bytep>(bytes + stride * static_cast<std::size_t>(v));
  }
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, bit_depth == 16 ? PNG_TRANSFORM_SWAP_ENDIAN : PNG_TRANSFORM_IDENTITY,
                nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace detail

inline DepthImage read_png_depth(const std::string& path, double depth_scale = 0.001) {
  const auto gray = detail::read_png_gray(path);
  DepthImage img(gray.width, gray.height, depth_scale);
  img.values = gray.samples;
  return img;
}

inline void write_png_depth(const std::string& path, const DepthImage& img) {
  img.validate();
  return detail::write_png_gray(path, img.width, img.height, 16,
                                reinterpret_cast<const std::uint8_t*>(img.values.data()));
}

inline MaskImage read_png_mask(const std::string& path) {
  const auto gray = detail::read_png_gray(path);
  MaskImage img(gray.width, gray.height);
  for (std::size_t i = 0; i < gray.samples.size(); ++i) {
    const std::uint16_t v = gray.samples[i];
    img.values[i] = static_cast<std::uint8_t>(gray.bit_depth == 16 ? (v >> 8) : v);
  }
  return img;
}

inline void write_png_mask(const std::string& path, const MaskImage& img) {
  return detail::write_png_gray(path, img.width, img.height, 8, img.values.data());
}

}  // namespace kdereg::io
