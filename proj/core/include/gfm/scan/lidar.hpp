#pragma once

#include "gfm/geometry.hpp"
#include "gfm/world/occupancy_grid.hpp"
#include "gfm/world/raycast.hpp"

#include <vector>

namespace gfm::scan {

struct LidarConfig {
  double fov = kPi / 2.0;  // rad
  int n_rays = 64;
  double max_range = 5.0;  // m
};

/// One simulated sweep: body-frame ray angles and the matching ray casts.
struct Scan {
  PoseSE2 pose;
  std::vector<double> ray_angles;     // body frame, rad
  std::vector<world::RayHit> hits;    // parallel to ray_angles

  std::size_t size() const { return ray_angles.size(); }
  /// Number of returns (rays that hit), the N of the alignment objective.
  std::size_t hit_count() const;
  /// Hit points expressed in the body frame of `pose`.
  std::vector<Eigen::Vector2d> body_points() const;
};

/// Casts n_rays rays evenly spaced over [theta - fov/2, theta + fov/2).
/// Throws if the pose sits inside an obstacle.
Scan simulate_scan(const world::OccupancyGrid& grid, const PoseSE2& pose,
                   const LidarConfig& config);

}  // namespace gfm::scan
