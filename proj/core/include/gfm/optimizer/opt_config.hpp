#pragma once

#include "gfm/geometry.hpp"

namespace gfm::optimizer {

struct OptConfig {
  // Cost weights.
  double lambda_l = 1.0;   // localization cost
  double lambda_e = 1.0;   // energy cost
  double lambda_g = 1e4;   // constraint penalty
  double rho = 20.0;       // time regularization inside the energy term

  // Constraint limits.
  double safety_distance = 0.3;  // m, clearance d
  double v_max = 2.0;            // m/s
  double a_max = 3.0;            // m/s^2
  double omega_max = 2.0;        // rad/s
  double alpha_max = 3.0;        // rad/s^2

  // Quadrature and metric sampling.
  int samples_per_segment = 16;  // k_i
  double sigmoid_epsilon = 1.0;  // eps of the metric sigmoid
  double fov = kPi / 2.0;        // rad, LiDAR FOV for the metric window

  // Solver.
  int lbfgs_memory = 8;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double grad_tol = 1e-5;
  double cost_rel_tol = 1e-8;
  int max_iterations = 300;
};

/// Cost breakdown at one iterate. total = lambda_l*J_l + lambda_e*J_e +
/// lambda_g*J_G by construction.
struct CostReport {
  double total = 0.0;
  double localization = 0.0;  // J_l
  double energy = 0.0;        // J_e
  double penalty = 0.0;       // J_G
  double grad_norm = 0.0;     // over the free variables (Q, tau)
  // Worst constraint violations over the quadrature samples.
  double max_clearance_deficit = 0.0;  // m
  double max_velocity_overshoot = 0.0;   // m/s
  double max_accel_overshoot = 0.0;      // m/s^2
  double max_omega_overshoot = 0.0;      // rad/s
  double max_alpha_overshoot = 0.0;      // rad/s^2
};

}  // namespace gfm::optimizer
