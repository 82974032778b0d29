#pragma once

#include "gfm/mem/metric_map.hpp"
#include "gfm/minco/minco.hpp"
#include "gfm/optimizer/opt_config.hpp"
#include "gfm/world/distance_field.hpp"

#include <Eigen/Core>

namespace gfm::optimizer {

/// One cost term: value plus partial gradients with respect to the
/// polynomial coefficients and (directly) the segment times. The time
/// gradient here holds the coefficients fixed; the full chain through the
/// coefficient map is applied by MincoTrajectory::propagate_gradient.
struct CostTerms {
  double value = 0.0;
  Eigen::MatrixX3d grad_coeffs;
  Eigen::VectorXd grad_times;
};

/// Trapezoid-integrated sigmoid of the metric along the trajectory; the
/// time gradient carries both the quadrature-weight term and the
/// moving-sample-point term.
CostTerms localization_cost(const minco::MincoTrajectory& traj,
                            const mem::MetricEncodingMap& mem,
                            const OptConfig& config);

/// Closed-form integral of the squared s-th derivative plus rho * total
/// time.
CostTerms energy_cost(const minco::MincoTrajectory& traj,
                      const OptConfig& config);

struct ViolationReport {
  double max_clearance_deficit = 0.0;
  double max_velocity_overshoot = 0.0;
  double max_accel_overshoot = 0.0;
  double max_omega_overshoot = 0.0;
  double max_alpha_overshoot = 0.0;
};

/// Trapezoid-sampled penalties for clearance, translational velocity and
/// acceleration, and yaw rate and acceleration. The max kinks take the
/// zero subgradient on the inactive side.
CostTerms penalty_cost(const minco::MincoTrajectory& traj,
                       const world::DistanceField& df, const OptConfig& config,
                       ViolationReport* violations = nullptr);

}  // namespace gfm::optimizer
