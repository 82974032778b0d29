#pragma once

#include "gfm/world/occupancy_grid.hpp"

#include <Eigen/Core>

#include <vector>

namespace gfm::world {

struct FieldSample {
  double distance = 0.0;         // meters to nearest obstacle boundary
  Eigen::Vector2d gradient{0.0, 0.0};
  bool in_bounds = true;
};

/// Euclidean distance field over the cells of an occupancy grid.
///
/// Distances are measured from cell centers to the nearest occupied cell
/// center, minus half a cell to approximate the obstacle boundary (clamped
/// at zero, so cells inside obstacles read 0). Continuous queries use
/// bilinear interpolation on the cell-center lattice; the reported gradient
/// is the exact derivative of that interpolant, so finite differences of
/// sample() reproduce it away from cell-boundary creases.
class DistanceField {
 public:
  explicit DistanceField(const OccupancyGrid& grid);

  bool has_obstacles() const { return has_obstacles_; }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Eigen::Vector2d& origin() const { return origin_; }

  double distance_at(const CellIndex& c) const {
    return distance_[static_cast<std::size_t>(c.y) * width_ + c.x];
  }
  /// Central-difference gradient stored per cell.
  Eigen::Vector2d gradient_at(const CellIndex& c) const {
    const auto i = static_cast<std::size_t>(c.y) * width_ + c.x;
    return {grad_x_[i], grad_y_[i]};
  }

  /// Bilinear distance and interpolant gradient at a world point.
  /// Out-of-bounds queries read distance 0 with the gradient pointing back
  /// toward the map interior (conservative for clearance penalties).
  FieldSample sample(const Eigen::Vector2d& p) const;

 private:
  int width_;
  int height_;
  double resolution_;
  Eigen::Vector2d origin_;
  bool has_obstacles_;
  std::vector<double> distance_;
  std::vector<double> grad_x_;
  std::vector<double> grad_y_;
};

}  // namespace gfm::world
