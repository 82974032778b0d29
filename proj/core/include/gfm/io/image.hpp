#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfm::io {

struct ImageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 8-bit single-channel raster, row-major, row 0 at the top.
struct ImageGray8 {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;

  uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

/// 16-bit 4-channel raster (interleaved RGBA, host byte order in memory).
struct ImageRgba16 {
  int width = 0;
  int height = 0;
  std::vector<uint16_t> pixels;  // width*height*4

  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 4;
  }
};

/// 8-bit 3-channel raster for rendered output.
struct ImageRgb8 {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // width*height*3

  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
};

/// Reads a grayscale raster from PNG (any color type, collapsed to gray)
/// or PGM (P2/P5). The format is detected from the file magic.
ImageGray8 read_gray8(const std::string& path);

/// Binary PGM (P5), maxval 255.
void write_pgm(const std::string& path, const ImageGray8& img);

/// 16-bit RGBA PNG. Channel samples are written big-endian as PNG requires.
void write_rgba16_png(const std::string& path, const ImageRgba16& img);
ImageRgba16 read_rgba16_png(const std::string& path);

void write_rgb8_png(const std::string& path, const ImageRgb8& img);
ImageRgb8 read_rgb8_png(const std::string& path);

}  // namespace gfm::io
