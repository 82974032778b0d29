#include "gfm/scan/lidar.hpp"

#include <stdexcept>

namespace gfm::scan {

std::size_t Scan::hit_count() const {
  std::size_t n = 0;
  for (const auto& h : hits) n += h.hit ? 1 : 0;
  return n;
}

std::vector<Eigen::Vector2d> Scan::body_points() const {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(hits.size());
  const Eigen::Matrix2d rt = pose.rotation().transpose();
  const Eigen::Vector2d t = pose.position();
  for (const auto& h : hits) {
    if (h.hit) {
      pts.push_back(rt * (h.point - t));
    }
  }
  return pts;
}

Scan simulate_scan(const world::OccupancyGrid& grid, const PoseSE2& pose,
                   const LidarConfig& config) {
  if (config.n_rays < 1) {
    throw std::invalid_argument("simulate_scan requires n_rays >= 1");
  }
  if (!(config.fov > 0.0) || config.fov > kTwoPi + 1e-12) {
    throw std::invalid_argument("simulate_scan requires fov in (0, 2*pi]");
  }
  Scan s;
  s.pose = pose;
  s.ray_angles.reserve(config.n_rays);
  s.hits.reserve(config.n_rays);
  const double step = config.fov / config.n_rays;
  const Eigen::Vector2d origin = pose.position();
  for (int k = 0; k < config.n_rays; ++k) {
    const double body = -0.5 * config.fov + k * step;
    s.ray_angles.push_back(body);
    s.hits.push_back(
        world::raycast(grid, origin, pose.theta + body, config.max_range));
  }
  return s;
}

}  // namespace gfm::scan
