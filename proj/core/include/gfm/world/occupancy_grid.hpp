#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gfm::world {

struct CellIndex {
  int x = 0;
  int y = 0;
  bool operator==(const CellIndex&) const = default;
};

/// Binary occupancy grid. Cell (0,0) has its lower-left corner at `origin`;
/// cell centers sit at origin + (i + 0.5, j + 0.5) * resolution.
/// Immutable after construction.
class OccupancyGrid {
 public:
  OccupancyGrid(int width, int height, double resolution,
                const Eigen::Vector2d& origin, std::vector<uint8_t> cells);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Eigen::Vector2d& origin() const { return origin_; }

  bool in_bounds(const CellIndex& c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }
  bool in_bounds_world(const Eigen::Vector2d& p) const {
    return p.x() >= origin_.x() && p.x() < origin_.x() + width_ * resolution_ &&
           p.y() >= origin_.y() && p.y() < origin_.y() + height_ * resolution_;
  }

  bool occupied(const CellIndex& c) const {
    return cells_[index_of(c)] != 0;
  }
  /// Out-of-bounds counts as occupied.
  bool occupied_clamped(const CellIndex& c) const {
    return !in_bounds(c) || occupied(c);
  }
  bool free(const CellIndex& c) const { return !occupied(c); }

  CellIndex world_to_cell(const Eigen::Vector2d& p) const {
    return {static_cast<int>(std::floor((p.x() - origin_.x()) / resolution_)),
            static_cast<int>(std::floor((p.y() - origin_.y()) / resolution_))};
  }
  Eigen::Vector2d cell_center(const CellIndex& c) const {
    return {origin_.x() + (c.x + 0.5) * resolution_,
            origin_.y() + (c.y + 0.5) * resolution_};
  }

  std::size_t index_of(const CellIndex& c) const {
    return static_cast<std::size_t>(c.y) * width_ + c.x;
  }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t occupied_count() const { return occupied_count_; }

  /// 8-connected component label of an occupied cell (-1 for free cells).
  /// Labels are assigned in row-major discovery order, deterministically.
  int obstacle_component(const CellIndex& c) const {
    return component_[index_of(c)];
  }

  const std::vector<uint8_t>& cells() const { return cells_; }

  /// Content hash of (dimensions, resolution, origin, cells); used to tie
  /// derived products back to their source map.
  uint64_t content_hash() const { return hash_; }

 private:
  void label_components();

  int width_;
  int height_;
  double resolution_;
  Eigen::Vector2d origin_;
  std::vector<uint8_t> cells_;
  std::vector<int32_t> component_;
  std::size_t occupied_count_ = 0;
  uint64_t hash_ = 0;
};

}  // namespace gfm::world
