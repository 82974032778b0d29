#include "gfm/mem/mem_io.hpp"

#include "gfm/errors.hpp"
#include "gfm/io/image.hpp"

#include <json.hpp>

#include <fstream>

namespace gfm::mem {

namespace {

// <name>.png pairs with <name>.mem.json.
std::string sidecar_path(const std::string& png_path) {
  std::string base = png_path;
  if (base.size() > 4 && base.substr(base.size() - 4) == ".png") {
    base.resize(base.size() - 4);
  }
  return base + ".mem.json";
}

}  // namespace

void save_mem(const MetricEncodingMap& mem, const std::string& png_path) {
  io::ImageRgba16 img;
  img.width = mem.width();
  img.height = mem.height();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 4);
  for (int y = 0; y < mem.height(); ++y) {
    const int row = mem.height() - 1 - y;  // image row 0 = max-y grid row
    for (int x = 0; x < mem.width(); ++x) {
      const uint64_t code = mem.code_at({x, y});
      const std::size_t o = img.offset(x, row);
      img.pixels[o + 0] = static_cast<uint16_t>(code & 0xFFFF);          // R
      img.pixels[o + 1] = static_cast<uint16_t>((code >> 16) & 0xFFFF);  // G
      img.pixels[o + 2] = static_cast<uint16_t>((code >> 32) & 0xFFFF);  // B
      img.pixels[o + 3] = static_cast<uint16_t>((code >> 48) & 0xFFFF);  // A
    }
  }
  io::write_rgba16_png(png_path, img);

  const MemMeta& m = mem.meta();
  nlohmann::json j;
  j["width"] = mem.width();
  j["height"] = mem.height();
  j["resolution_m"] = mem.resolution();
  j["origin_xy_m"] = {mem.origin().x(), mem.origin().y()};
  j["angle_count"] = m.angle_count;
  j["max_range_m"] = m.max_range;
  j["tau_rank"] = m.tau_rank;
  j["fd_step_xy_m"] = m.fd_step_xy;
  j["fd_step_theta_rad"] = m.fd_step_theta;
  j["source_map_hash"] = m.source_map_hash;
  j["bit_layout"] =
      "R=bits 0-15, G=16-31, B=32-47, A=48-63; 16-bit big-endian channels";
  std::ofstream out(sidecar_path(png_path));
  if (!out) {
    throw io::ImageError("cannot write MEM sidecar for " + png_path);
  }
  out << j.dump(2) << "\n";
}

LoadedMem load_mem(const std::string& png_path, uint64_t expected_source_hash) {
  std::ifstream in(sidecar_path(png_path));
  if (!in) {
    throw io::ImageError("missing MEM sidecar: " + sidecar_path(png_path));
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed MEM sidecar: " + std::string(e.what()));
  }

  MemMeta meta;
  int width = 0, height = 0;
  double resolution = 0.0;
  Eigen::Vector2d origin{0.0, 0.0};
  try {
    width = j.at("width").get<int>();
    height = j.at("height").get<int>();
    resolution = j.at("resolution_m").get<double>();
    origin = {j.at("origin_xy_m").at(0).get<double>(),
              j.at("origin_xy_m").at(1).get<double>()};
    meta.angle_count = j.at("angle_count").get<int>();
    meta.max_range = j.at("max_range_m").get<double>();
    meta.tau_rank = j.at("tau_rank").get<double>();
    meta.fd_step_xy = j.at("fd_step_xy_m").get<double>();
    meta.fd_step_theta = j.at("fd_step_theta_rad").get<double>();
    meta.source_map_hash = j.at("source_map_hash").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid MEM sidecar: " + std::string(e.what()));
  }

  const io::ImageRgba16 img = io::read_rgba16_png(png_path);
  if (img.width != width || img.height != height) {
    throw ConfigError("MEM image dimensions disagree with sidecar");
  }

  std::vector<uint64_t> codes(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const int row = height - 1 - y;
    for (int x = 0; x < width; ++x) {
      const std::size_t o = img.offset(x, row);
      const uint64_t code = static_cast<uint64_t>(img.pixels[o + 0]) |
                            static_cast<uint64_t>(img.pixels[o + 1]) << 16 |
                            static_cast<uint64_t>(img.pixels[o + 2]) << 32 |
                            static_cast<uint64_t>(img.pixels[o + 3]) << 48;
      codes[static_cast<std::size_t>(y) * width + x] = code;
    }
  }

  LoadedMem out{MetricEncodingMap(width, height, resolution, origin,
                                  std::move(codes), meta),
                std::nullopt};
  if (expected_source_hash != 0 &&
      expected_source_hash != meta.source_map_hash) {
    out.warning = "MEM source map hash mismatch: the MEM was built from a "
                  "different map than the one supplied";
  }
  return out;
}

}  // namespace gfm::mem
