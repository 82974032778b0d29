#include "gfm/scan/ray_jacobian.hpp"

#include "gfm/world/raycast.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gfm::scan {

namespace {

struct Probe {
  Eigen::Matrix<double, 2, 3> jacobian;
  double range = 0.0;
};

// Casts with the origin-validity checks FD probing needs: a perturbed
// origin that leaves free space simply invalidates the stencil.
std::optional<world::RayHit> try_cast(const world::OccupancyGrid& grid,
                                      const Eigen::Vector2d& origin,
                                      double angle, double max_range) {
  if (!grid.in_bounds_world(origin) || grid.occupied(grid.world_to_cell(origin))) {
    return std::nullopt;
  }
  world::RayHit h = world::raycast(grid, origin, angle, max_range);
  if (!h.hit) {
    return std::nullopt;
  }
  return h;
}

std::optional<Probe> probe_ray(const world::OccupancyGrid& grid,
                               const PoseSE2& pose, double body_angle,
                               double max_range, const RankConfig& config) {
  const double angle = pose.theta + body_angle;
  const Eigen::Vector2d origin = pose.position();

  const auto base = try_cast(grid, origin, angle, max_range);
  if (!base) {
    return std::nullopt;
  }
  const int component = grid.obstacle_component(base->surface_cell);

  const double dxy = config.fd_step_xy;
  const double dth = config.fd_step_theta;
  const Eigen::Vector2d ex(dxy, 0.0), ey(0.0, dxy);

  const std::optional<world::RayHit> probes[6] = {
      try_cast(grid, origin + ex, angle, max_range),
      try_cast(grid, origin - ex, angle, max_range),
      try_cast(grid, origin + ey, angle, max_range),
      try_cast(grid, origin - ey, angle, max_range),
      try_cast(grid, origin, angle + dth, max_range),
      try_cast(grid, origin, angle - dth, max_range),
  };
  for (const auto& p : probes) {
    if (!p || grid.obstacle_component(p->surface_cell) != component) {
      return std::nullopt;
    }
  }

  Probe out;
  out.range = base->range;
  out.jacobian.col(0) = (probes[0]->point - probes[1]->point) / (2.0 * dxy);
  out.jacobian.col(1) = (probes[2]->point - probes[3]->point) / (2.0 * dxy);
  out.jacobian.col(2) = (probes[4]->point - probes[5]->point) / (2.0 * dth);
  return out;
}

}  // namespace

std::optional<Eigen::Matrix<double, 2, 3>> hit_jacobian_fd(
    const world::OccupancyGrid& grid, const PoseSE2& pose, double body_angle,
    double max_range, const RankConfig& config) {
  const auto probe = probe_ray(grid, pose, body_angle, max_range, config);
  if (!probe) {
    return std::nullopt;
  }
  return probe->jacobian;
}

Eigen::Matrix<double, 2, 3> hit_jacobian_analytic(const SurfaceLine& line,
                                                  const PoseSE2& pose,
                                                  double ray_slope) {
  const double k = ray_slope;
  const double denom = line.A + line.B * k;
  const double scale = std::max(std::abs(line.A), std::abs(line.B));
  if (std::abs(denom) <= 1e-12 * std::max(scale, 1.0)) {
    throw std::domain_error("ray is grazing the surface line (A + B*k ~ 0)");
  }
  const double aminx = line.a - pose.x;
  Eigen::Matrix<double, 2, 3> j;
  j(0, 0) = line.B * k;
  j(0, 1) = -line.B;
  j(0, 2) = -(1.0 + k * k) * aminx * line.B;
  j(1, 0) = -line.A * k;
  j(1, 1) = line.A;
  j(1, 2) = (1.0 + k * k) * aminx * line.A;
  j /= denom;
  return j;
}

double jacobian_sigma_ratio(const Eigen::Matrix<double, 2, 3>& jacobian,
                            double hit_range) {
  Eigen::Matrix<double, 2, 3> j = jacobian;
  j.col(2) /= std::max(hit_range, 1e-9);
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(j);
  const double s0 = svd.singularValues()(0);
  const double s1 = svd.singularValues()(1);
  return s1 / std::max(s0, std::numeric_limits<double>::epsilon());
}

RayClass classify_ray(const world::OccupancyGrid& grid, const PoseSE2& pose,
                      double body_angle, double max_range,
                      const RankConfig& config) {
  const auto probe = probe_ray(grid, pose, body_angle, max_range, config);
  if (!probe) {
    return RayClass::kMiss;
  }
  return jacobian_sigma_ratio(probe->jacobian, probe->range) > config.tau_rank
             ? RayClass::kRank2
             : RayClass::kRank1;
}

}  // namespace gfm::scan
