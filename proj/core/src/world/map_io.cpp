#include "gfm/world/map_io.hpp"

#include "gfm/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace gfm::world {

OccupancyGrid load_occupancy(const io::ImageGray8& raster, const MapMeta& meta) {
  if (raster.width < 1 || raster.height < 1) {
    throw io::ImageError("empty raster");
  }
  if (!(meta.resolution_m > 0.0)) {
    throw ConfigError("map resolution must be > 0");
  }
  if (meta.occupied_below <= 0 || meta.occupied_below >= 255) {
    throw ConfigError("occupied_below threshold must lie in (0, 255)");
  }
  std::vector<uint8_t> cells(static_cast<std::size_t>(raster.width) *
                             raster.height);
  for (int y = 0; y < raster.height; ++y) {
    const int row = raster.height - 1 - y;  // image top row = max-y grid row
    for (int x = 0; x < raster.width; ++x) {
      cells[static_cast<std::size_t>(y) * raster.width + x] =
          raster.at(x, row) < meta.occupied_below ? 1 : 0;
    }
  }
  return OccupancyGrid(raster.width, raster.height, meta.resolution_m,
                       meta.origin_xy_m, std::move(cells));
}

MapMeta read_map_meta(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) {
    throw io::ImageError("cannot open map metadata: " + json_path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed map metadata " + json_path + ": " + e.what());
  }
  MapMeta meta;
  try {
    meta.resolution_m = j.at("resolution_m").get<double>();
    const auto& o = j.at("origin_xy_m");
    meta.origin_xy_m = {o.at(0).get<double>(), o.at(1).get<double>()};
    meta.occupied_below = j.value("occupied_below", 128);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid map metadata " + json_path + ": " + e.what());
  }
  return meta;
}

OccupancyGrid load_map(const std::string& image_path) {
  const io::ImageGray8 raster = io::read_gray8(image_path);
  const MapMeta meta = read_map_meta(image_path + ".json");
  return load_occupancy(raster, meta);
}

void write_map(const std::string& image_path, const OccupancyGrid& grid) {
  io::ImageGray8 img;
  img.width = grid.width();
  img.height = grid.height();
  img.pixels.resize(grid.cell_count());
  for (int y = 0; y < grid.height(); ++y) {
    const int row = grid.height() - 1 - y;
    for (int x = 0; x < grid.width(); ++x) {
      img.pixels[static_cast<std::size_t>(row) * grid.width() + x] =
          grid.occupied({x, y}) ? 0 : 255;
    }
  }
  io::write_pgm(image_path, img);

  nlohmann::json j;
  j["resolution_m"] = grid.resolution();
  j["origin_xy_m"] = {grid.origin().x(), grid.origin().y()};
  j["occupied_below"] = 128;
  std::ofstream out(image_path + ".json");
  if (!out) {
    throw io::ImageError("cannot write map metadata for " + image_path);
  }
  out << j.dump(2) << "\n";
}

}  // namespace gfm::world
