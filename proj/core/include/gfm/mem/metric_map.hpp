#pragma once

#include "gfm/geometry.hpp"
#include "gfm/mem/codec.hpp"
#include "gfm/scan/ray_jacobian.hpp"
#include "gfm/world/occupancy_grid.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace gfm::mem {

struct MemMeta {
  int angle_count = kAngleCount;
  double max_range = 5.0;        // m, LiDAR range used during the build
  double tau_rank = 0.05;
  double fd_step_xy = 0.025;     // m
  double fd_step_theta = 0.0;    // rad
  uint64_t source_map_hash = 0;  // OccupancyGrid::content_hash of the source
};

/// Metric Encoding Map: one 64-bit rank code per grid cell, same geometry
/// as the source occupancy grid. Obstacle cells carry the all-ones code.
/// Immutable after construction and safe for concurrent reads.
class MetricEncodingMap {
 public:
  MetricEncodingMap(int width, int height, double resolution,
                    const Eigen::Vector2d& origin, std::vector<uint64_t> codes,
                    const MemMeta& meta);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  const MemMeta& meta() const { return meta_; }
  const std::vector<uint64_t>& codes() const { return codes_; }

  bool in_bounds(const world::CellIndex& c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }
  uint64_t code_at(const world::CellIndex& c) const {
    return codes_[static_cast<std::size_t>(c.y) * width_ + c.x];
  }
  /// Full-window metric of a cell (window 1..L).
  int full_window_count(const world::CellIndex& c) const {
    return gfm_discrete(code_at(c), 1, kAngleCount);
  }

 private:
  int width_;
  int height_;
  double resolution_;
  Eigen::Vector2d origin_;
  std::vector<uint64_t> codes_;
  MemMeta meta_;
};

struct MemBuildConfig {
  double max_range = 5.0;
  scan::RankConfig rank;          // tau and FD steps
  int threads = 0;                // 0 = hardware concurrency
};

/// Classifies kAngleCount rays from every free cell center and packs the
/// per-angle ranks into cell codes (Miss counts as rank deficient: a ray
/// with no return constrains nothing). Obstacle cells get the all-ones
/// code. Cells are independent, so the build runs in parallel; the result
/// does not depend on the worker count.
MetricEncodingMap build_mem(const world::OccupancyGrid& grid,
                            const MemBuildConfig& config);

/// Metric value and pose gradient at a continuous pose.
struct GfmSample {
  double value = 0.0;                      // in [0, kAngleCount]
  Eigen::Vector3d gradient{0.0, 0.0, 0.0}; // d/dx, d/dy, d/dtheta
};

/// Quadrilinear interpolation of the windowed metric over (x, y, window
/// start, window end). The FOV [theta-fov/2, theta+fov/2] maps to
/// fractional discrete-angle indices; both endpoints shift with yaw. The
/// gradient is the exact derivative of the interpolant, so finite
/// differences of this function reproduce it away from knot creases.
/// Out-of-bounds poses read the worst value (kAngleCount) with zero
/// gradient.
GfmSample gfm_continuous(const MetricEncodingMap& mem, const PoseSE2& pose,
                         double fov);

}  // namespace gfm::mem
