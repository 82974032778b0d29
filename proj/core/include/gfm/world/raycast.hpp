#pragma once

#include "gfm/world/occupancy_grid.hpp"

#include <Eigen/Core>

namespace gfm::world {

struct RayHit {
  bool hit = false;
  Eigen::Vector2d point{0.0, 0.0};  // boundary intersection, world coords
  double range = 0.0;               // meters; equals max_range on a miss
  CellIndex surface_cell{0, 0};     // occupied cell that was struck
};

/// Exact grid-walking ray cast (DDA). Returns the first occupied-cell
/// boundary intersection, or a miss if none occurs within max_range or the
/// ray exits the map. The origin must lie in a free in-bounds cell; a ray
/// started inside an obstacle is a caller bug and throws.
RayHit raycast(const OccupancyGrid& grid, const Eigen::Vector2d& origin,
               double angle, double max_range);

}  // namespace gfm::world
