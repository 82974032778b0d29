#pragma once

#include "gfm/io/image.hpp"
#include "gfm/world/occupancy_grid.hpp"

#include <string>

namespace gfm::world {

struct MapMeta {
  double resolution_m = 0.05;
  Eigen::Vector2d origin_xy_m{0.0, 0.0};
  int occupied_below = 128;  // pixel values strictly below are obstacles
};

/// Builds a grid from a grayscale raster: a cell is occupied iff its pixel
/// value is below meta.occupied_below. Image row 0 maps to the top of the
/// map (grid row height-1), so the raster displays right side up.
OccupancyGrid load_occupancy(const io::ImageGray8& raster, const MapMeta& meta);

/// Reads `image_path` (PGM or PNG) plus its `<image_path>.json` sidecar.
OccupancyGrid load_map(const std::string& image_path);

MapMeta read_map_meta(const std::string& json_path);

/// Writes a P5 PGM (free=255, occupied=0) and the JSON sidecar.
void write_map(const std::string& image_path, const OccupancyGrid& grid);

}  // namespace gfm::world
