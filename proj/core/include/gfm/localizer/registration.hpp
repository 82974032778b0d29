#pragma once

#include "gfm/geometry.hpp"
#include "gfm/world/distance_field.hpp"

#include <Eigen/Core>

#include <vector>

namespace gfm::localizer {

/// Scan-to-map registration state: fixed body-frame measurements, the
/// distance field they are aligned against, and the current pose estimate.
/// A well-posed 3-DoF solve needs at least three points.
struct Registration {
  std::vector<Eigen::Vector2d> body_points;
  const world::DistanceField* field = nullptr;
  PoseSE2 estimate;
};

struct ObjectiveEval {
  double f = 0.0;
  Eigen::Vector3d gradient{0.0, 0.0, 0.0};
};

/// Alignment objective f(p) = 1/2 sum E(L_i(p))^2 with L_i(p) = t + R(theta)
/// z_i, and its gradient sum E(q_i) J_i^T grad E(q_i) where J_i =
/// [I | R'(theta) z_i] is the fixed-measurement Jacobian.
ObjectiveEval objective_and_gradient(const Registration& reg);

/// Gauss-Newton Hessian term H1 (analytic, PSD by construction), the full
/// Hessian by finite differences of the gradient, and their difference,
/// which stands in for the residual curvature terms.
struct HessianSplit {
  Eigen::Matrix3d h1;
  Eigen::Matrix3d h_total_fd;
  Eigen::Matrix3d residual;         // h_total_fd - h1
  Eigen::Vector3d h1_eigenvalues;   // ascending
  Eigen::Matrix3d h1_eigenvectors;  // columns, matching the eigenvalues
};

HessianSplit hessian_analysis(const Registration& reg, double fd_step = 1e-4);

struct LocalizeResult {
  PoseSE2 pose;
  bool converged = false;
  int iterations = 0;
};

/// Damped Gauss-Newton iteration p <- p - (H1 + mu I)^{-1} grad f. Stops on
/// step norm below tol; flags divergence when the objective grows five
/// consecutive iterations.
LocalizeResult gauss_newton_localize(const Registration& reg,
                                     int max_iterations = 30,
                                     double tol = 1e-4, double damping = 1e-6);

}  // namespace gfm::localizer
