#include "gfm/io/image.hpp"

#include <png.h>

#include <bit>
#include <cctype>
#include <cstdio>
#include <memory>

namespace gfm::io {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw ImageError("cannot open file: " + path);
  }
  return f;
}

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  (void)png;
  throw ImageError(std::string("libpng: ") + msg);
}
void png_warn_fn(png_structp, png_const_charp) {}

int skip_pgm_ws(std::FILE* f) {
  int c = std::fgetc(f);
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = std::fgetc(f);
    } else if (!std::isspace(c)) {
      break;
    }
    c = std::fgetc(f);
  }
  return c;
}

long read_pgm_int(std::FILE* f) {
  int c = skip_pgm_ws(f);
  if (c == EOF || !std::isdigit(c)) {
    throw ImageError("malformed PGM header");
  }
  long v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    c = std::fgetc(f);
  }
  return v;
}

ImageGray8 read_pgm(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  int m0 = std::fgetc(f.get());
  int m1 = std::fgetc(f.get());
  if (m0 != 'P' || (m1 != '2' && m1 != '5')) {
    throw ImageError("not a PGM file: " + path);
  }
  const bool binary = m1 == '5';
  const long w = read_pgm_int(f.get());
  const long h = read_pgm_int(f.get());
  const long maxval = read_pgm_int(f.get());
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) {
    throw ImageError("unsupported PGM geometry in " + path);
  }
  ImageGray8 img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.pixels.resize(static_cast<std::size_t>(w) * h);
  if (binary) {
    // The single whitespace after maxval was already consumed by read_pgm_int.
    if (std::fread(img.pixels.data(), 1, img.pixels.size(), f.get()) !=
        img.pixels.size()) {
      throw ImageError("truncated PGM payload in " + path);
    }
  } else {
    for (auto& px : img.pixels) {
      px = static_cast<uint8_t>(read_pgm_int(f.get()));
    }
  }
  return img;
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

}  // namespace

ImageGray8 read_gray8(const std::string& path) {
  {
    FilePtr probe = open_file(path, "rb");
    unsigned char magic[2] = {0, 0};
    if (std::fread(magic, 1, 2, probe.get()) == 2 && magic[0] == 'P' &&
        (magic[1] == '2' || magic[1] == '5')) {
      probe.reset();
      return read_pgm(path);
    }
  }

  FilePtr f = open_file(path, "rb");
  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn,
                                 png_warn_fn);
  r.info = png_create_info_struct(r.png);
  if (!r.png || !r.info) throw ImageError("libpng allocation failure");
  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);

  png_set_expand(r.png);
  if (png_get_bit_depth(r.png, r.info) == 16) png_set_strip_16(r.png);
  const int color = png_get_color_type(r.png, r.info);
  if (color & PNG_COLOR_MASK_COLOR) {
    png_set_rgb_to_gray_fixed(r.png, 1, -1, -1);
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(r.png);
  png_read_update_info(r.png, r.info);

  ImageGray8 img;
  img.width = static_cast<int>(png_get_image_width(r.png, r.info));
  img.height = static_cast<int>(png_get_image_height(r.png, r.info));
  if (png_get_channels(r.png, r.info) != 1) {
    throw ImageError("grayscale conversion failed for " + path);
  }
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * img.width;
  }
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

void write_pgm(const std::string& path, const ImageGray8& img) {
  FilePtr f = open_file(path, "wb");
  std::fprintf(f.get(), "P5\n%d %d\n255\n", img.width, img.height);
  if (std::fwrite(img.pixels.data(), 1, img.pixels.size(), f.get()) !=
      img.pixels.size()) {
    throw ImageError("failed to write PGM payload to " + path);
  }
}

void write_rgba16_png(const std::string& path, const ImageRgba16& img) {
  FilePtr f = open_file(path, "wb");
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn,
                                  png_warn_fn);
  w.info = png_create_info_struct(w.png);
  if (!w.png || !w.info) throw ImageError("libpng allocation failure");
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, img.width, img.height, 16, PNG_COLOR_TYPE_RGBA,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  if constexpr (std::endian::native == std::endian::little) {
    png_set_swap(w.png);
  }
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(
        const_cast<uint16_t*>(img.pixels.data() + img.offset(0, y)));
  }
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

ImageRgba16 read_rgba16_png(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn,
                                 png_warn_fn);
  r.info = png_create_info_struct(r.png);
  if (!r.png || !r.info) throw ImageError("libpng allocation failure");
  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);
  if (png_get_bit_depth(r.png, r.info) != 16 ||
      png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_RGBA) {
    throw ImageError("expected 16-bit RGBA PNG: " + path);
  }
  if constexpr (std::endian::native == std::endian::little) {
    png_set_swap(r.png);
  }
  png_read_update_info(r.png, r.info);

  ImageRgba16 img;
  img.width = static_cast<int>(png_get_image_width(r.png, r.info));
  img.height = static_cast<int>(png_get_image_height(r.png, r.info));
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 4);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(img.pixels.data() + img.offset(0, y));
  }
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

void write_rgb8_png(const std::string& path, const ImageRgb8& img) {
  FilePtr f = open_file(path, "wb");
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn,
                                  png_warn_fn);
  w.info = png_create_info_struct(w.png);
  if (!w.png || !w.info) throw ImageError("libpng allocation failure");
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = const_cast<png_bytep>(img.pixels.data() + img.offset(0, y));
  }
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

ImageRgb8 read_rgb8_png(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn,
                                 png_warn_fn);
  r.info = png_create_info_struct(r.png);
  if (!r.png || !r.info) throw ImageError("libpng allocation failure");
  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);
  if (png_get_bit_depth(r.png, r.info) != 16) png_set_strip_16(r.png);
  png_set_expand(r.png);
  if (png_get_color_type(r.png, r.info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(r.png, r.info) == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(r.png);
  }
  if (png_get_color_type(r.png, r.info) & PNG_COLOR_MASK_ALPHA) {
    png_set_strip_alpha(r.png);
  }
  png_read_update_info(r.png, r.info);

  ImageRgb8 img;
  img.width = static_cast<int>(png_get_image_width(r.png, r.info));
  img.height = static_cast<int>(png_get_image_height(r.png, r.info));
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 3);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = img.pixels.data() + img.offset(0, y);
  }
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

}  // namespace gfm::io
