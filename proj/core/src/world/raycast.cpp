#include "gfm/world/raycast.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gfm::world {

RayHit raycast(const OccupancyGrid& grid, const Eigen::Vector2d& origin,
               double angle, double max_range) {
  if (!grid.in_bounds_world(origin)) {
    throw std::invalid_argument("raycast origin outside map bounds");
  }
  CellIndex cell = grid.world_to_cell(origin);
  if (grid.occupied(cell)) {
    throw std::invalid_argument("raycast origin inside an obstacle");
  }

  const double res = grid.resolution();
  const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
  constexpr double kInf = std::numeric_limits<double>::infinity();

  const int step_x = dir.x() > 0.0 ? 1 : (dir.x() < 0.0 ? -1 : 0);
  const int step_y = dir.y() > 0.0 ? 1 : (dir.y() < 0.0 ? -1 : 0);

  // Ray parameter of the crossing into cell index `c` along each axis.
  auto cross_x = [&](int c) {
    const double plane = grid.origin().x() + (step_x > 0 ? c : c + 1) * res;
    return (plane - origin.x()) / dir.x();
  };
  auto cross_y = [&](int c) {
    const double plane = grid.origin().y() + (step_y > 0 ? c : c + 1) * res;
    return (plane - origin.y()) / dir.y();
  };

  double t_max_x = step_x != 0 ? cross_x(cell.x + step_x) : kInf;
  double t_max_y = step_y != 0 ? cross_y(cell.y + step_y) : kInf;

  RayHit miss;
  miss.hit = false;
  miss.range = max_range;

  while (true) {
    const bool take_x = t_max_x <= t_max_y;
    const double t = take_x ? t_max_x : t_max_y;
    if (!(t <= max_range)) {
      return miss;
    }
    if (take_x) {
      cell.x += step_x;
      t_max_x = cross_x(cell.x + step_x);
    } else {
      cell.y += step_y;
      t_max_y = cross_y(cell.y + step_y);
    }
    if (!grid.in_bounds(cell)) {
      return miss;
    }
    if (grid.occupied(cell)) {
      RayHit out;
      out.hit = true;
      out.range = t;
      out.point = origin + t * dir;
      out.surface_cell = cell;
      return out;
    }
  }
}

}  // namespace gfm::world
