#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patchrank/types.hpp"

namespace patchrank {

/// 8-bit RGB raster, row-major, interleaved channels.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 3 * width * height bytes

  std::uint8_t at(int x, int y, int channel) const {
    return pixels[static_cast<std::size_t>(3) * (static_cast<std::size_t>(y) * width + x) +
                  channel];
  }
  std::uint8_t& at(int x, int y, int channel) {
    return pixels[static_cast<std::size_t>(3) * (static_cast<std::size_t>(y) * width + x) +
                  channel];
  }
  bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

Frame make_frame(int width, int height);

/// Binary PPM ("P6", maxval 255).
Frame read_ppm(const std::string& path);
void write_ppm(const Frame& frame, const std::string& path);

/// Binary PGM ("P5", maxval 255). Values outside [0,1] are clamped,
/// then mapped to round(255 * value).
void write_pgm(const std::vector<double>& values, int width, int height,
               const std::string& path);
std::vector<std::uint8_t> read_pgm(const std::string& path, int& width, int& height);

/// Bilinear resampling to the target size.
Frame resize_bilinear(const Frame& frame, int new_width, int new_height);

}  // namespace patchrank
