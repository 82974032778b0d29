#pragma once

#include "gfm/geometry.hpp"
#include "gfm/world/occupancy_grid.hpp"

#include <Eigen/Core>

#include <optional>

namespace gfm::scan {

enum class RayClass { kRank1, kRank2, kMiss };

/// Numeric rank classification parameters. The finite-difference steps
/// default to a quarter cell and a quarter of the discrete angle spacing:
/// small enough for linearization, large enough to cross ray-cast
/// quantization.
struct RankConfig {
  double tau_rank = 0.05;
  double fd_step_xy = 0.025;            // m
  double fd_step_theta = kTwoPi / 256;  // rad

  static RankConfig defaults(double resolution, int discrete_angles = 64) {
    RankConfig c;
    c.fd_step_xy = 0.25 * resolution;
    c.fd_step_theta = 0.25 * (kTwoPi / discrete_angles);
    return c;
  }
};

/// Central-difference Jacobian of the ray-cast hit point with respect to
/// (x, y, theta). The theta column is taken with the body-frame ray angle
/// held fixed. Returns nullopt when the base ray or any perturbed ray
/// misses, starts inside an obstacle, or strikes a different obstacle
/// component (callers classify that as Miss).
std::optional<Eigen::Matrix<double, 2, 3>> hit_jacobian_fd(
    const world::OccupancyGrid& grid, const PoseSE2& pose, double body_angle,
    double max_range, const RankConfig& config);

/// Local line model of the struck surface, A(x-a) + B(y-b) = 0.
struct SurfaceLine {
  double A = 0.0;
  double B = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Closed-form hit-point Jacobian for a ray of slope k from a pose striking
/// a straight surface line:
///   (1 / (A + B k)) * [ Bk  -B  (1+k^2)(x0-a) B ]
///                     [-Ak   A  (1+k^2)(a-x0) A ]
/// Its rows are proportional (ratio -B/A), so the matrix has rank one.
/// Throws std::domain_error at grazing incidence (A + B k ~ 0).
Eigen::Matrix<double, 2, 3> hit_jacobian_analytic(const SurfaceLine& line,
                                                  const PoseSE2& pose,
                                                  double ray_slope);

/// Singular-value ratio of the Jacobian after dividing the theta column by
/// the hit range; the rank test thresholds this.
double jacobian_sigma_ratio(const Eigen::Matrix<double, 2, 3>& jacobian,
                            double hit_range);

/// Rank classification of one ray: Miss if there is no return (or the FD
/// stencil is invalid), otherwise the sigma-ratio test against tau_rank.
/// Deterministic for a fixed configuration.
RayClass classify_ray(const world::OccupancyGrid& grid, const PoseSE2& pose,
                      double body_angle, double max_range,
                      const RankConfig& config);

}  // namespace gfm::scan
