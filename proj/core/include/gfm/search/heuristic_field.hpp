#pragma once

#include "gfm/geometry.hpp"
#include "gfm/mem/metric_map.hpp"
#include "gfm/search/sigmoid.hpp"
#include "gfm/world/occupancy_grid.hpp"

#include <limits>
#include <vector>

namespace gfm::search {

/// Per-cell heuristic values from a single-source shortest-path pass over
/// the MEM, rooted at the goal cell. Unreachable cells hold +infinity.
class HeuristicField {
 public:
  HeuristicField(int width, int height, world::CellIndex goal,
                 std::vector<double> values)
      : width_(width), height_(height), goal_(goal), values_(std::move(values)) {}

  double at(const world::CellIndex& c) const {
    if (c.x < 0 || c.x >= width_ || c.y < 0 || c.y >= height_) {
      return std::numeric_limits<double>::infinity();
    }
    return values_[static_cast<std::size_t>(c.y) * width_ + c.x];
  }
  const world::CellIndex& goal_cell() const { return goal_; }
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  int width_;
  int height_;
  world::CellIndex goal_;
  std::vector<double> values_;
};

/// Dijkstra from the goal cell over 8-connected free cells. The weight of
/// stepping into cell b is sigmoid(full-window metric of b); the goal cell
/// itself accumulates nothing. Runs once per goal. Throws ConfigError when
/// the goal lies in an obstacle.
HeuristicField heuristic_presearch(const mem::MetricEncodingMap& mem,
                                   const world::OccupancyGrid& grid,
                                   const PoseSE2& goal,
                                   const SigmoidParams& params);

}  // namespace gfm::search
