#include "gfm/optimizer/optimize.hpp"

#include "gfm/optimizer/lbfgs.hpp"
#include "gfm/optimizer/time_warp.hpp"

#include <cmath>

namespace gfm::optimizer {

namespace {

struct Problem {
  const world::DistanceField* df;
  const mem::MetricEncodingMap* mem;
  const OptConfig* config;
  Eigen::Matrix3Xd start_state;
  Eigen::Matrix3Xd end_state;
  int segments;
  int s;

  minco::MincoTrajectory build(const Eigen::VectorXd& x) const {
    const int k = segments;
    Eigen::Matrix3Xd waypoints(3, k - 1);
    for (int i = 0; i < k - 1; ++i) {
      waypoints.col(i) = x.segment<3>(3 * i);
    }
    Eigen::VectorXd times(k);
    for (int i = 0; i < k; ++i) {
      times(i) = time_backward(x(3 * (k - 1) + i));
    }
    return minco::MincoTrajectory::construct(waypoints, times, start_state,
                                             end_state, s);
  }

  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& grad,
                  CostReport* report) const {
    const minco::MincoTrajectory traj = build(x);
    const OptConfig& cfg = *config;
    const int k = segments;

    Eigen::MatrixX3d grad_c = Eigen::MatrixX3d::Zero(2 * s * k, 3);
    Eigen::VectorXd grad_t = Eigen::VectorXd::Zero(k);

    double jl = 0.0;
    if (cfg.lambda_l != 0.0) {
      CostTerms loc = localization_cost(traj, *mem, cfg);
      jl = loc.value;
      grad_c += cfg.lambda_l * loc.grad_coeffs;
      grad_t += cfg.lambda_l * loc.grad_times;
    }

    CostTerms en = energy_cost(traj, cfg);
    grad_c += cfg.lambda_e * en.grad_coeffs;
    grad_t += cfg.lambda_e * en.grad_times;

    ViolationReport violations;
    CostTerms pen = penalty_cost(traj, *df, cfg, &violations);
    grad_c += cfg.lambda_g * pen.grad_coeffs;
    grad_t += cfg.lambda_g * pen.grad_times;

    Eigen::Matrix3Xd grad_q;
    Eigen::VectorXd grad_times_total;
    traj.propagate_gradient(grad_c, grad_t, grad_q, grad_times_total);

    grad.resize(x.size());
    for (int i = 0; i < k - 1; ++i) {
      grad.segment<3>(3 * i) = grad_q.col(i);
    }
    for (int i = 0; i < k; ++i) {
      grad(3 * (k - 1) + i) =
          grad_times_total(i) * time_backward_derivative(x(3 * (k - 1) + i));
    }

    const double total =
        cfg.lambda_l * jl + cfg.lambda_e * en.value + cfg.lambda_g * pen.value;
    if (report) {
      report->total = total;
      report->localization = jl;
      report->energy = en.value;
      report->penalty = pen.value;
      report->grad_norm = grad.norm();
      report->max_clearance_deficit = violations.max_clearance_deficit;
      report->max_velocity_overshoot = violations.max_velocity_overshoot;
      report->max_accel_overshoot = violations.max_accel_overshoot;
      report->max_omega_overshoot = violations.max_omega_overshoot;
      report->max_alpha_overshoot = violations.max_alpha_overshoot;
    }
    return total;
  }
};

Eigen::VectorXd pack(const minco::MincoTrajectory& traj) {
  const int k = traj.segment_count();
  Eigen::VectorXd x(3 * (k - 1) + k);
  for (int i = 0; i < k - 1; ++i) {
    x.segment<3>(3 * i) = traj.waypoints().col(i);
  }
  for (int i = 0; i < k; ++i) {
    x(3 * (k - 1) + i) = time_forward(traj.times()(i));
  }
  return x;
}

}  // namespace

OptimizeResult optimize(const minco::MincoTrajectory& initial,
                        const world::DistanceField& df,
                        const mem::MetricEncodingMap& mem,
                        const OptConfig& config) {
  Problem problem{&df, &mem,
                  &config, initial.start_state(),
                  initial.end_state(), initial.segment_count(),
                  initial.order()};

  OptimizeResult result;

  LbfgsParams params;
  params.memory = config.lbfgs_memory;
  params.wolfe_c1 = config.wolfe_c1;
  params.wolfe_c2 = config.wolfe_c2;
  params.grad_tol = config.grad_tol;
  params.rel_cost_tol = config.cost_rel_tol;
  params.max_iterations = config.max_iterations;

  auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    return problem.evaluate(x, grad, nullptr);
  };
  auto on_accept = [&](int, const Eigen::VectorXd& x, double, const Eigen::VectorXd&) {
    Eigen::VectorXd g;
    CostReport report;
    problem.evaluate(x, g, &report);
    result.history.push_back(report);
  };

  const LbfgsResult lbfgs =
      lbfgs_minimize(objective, pack(initial), params, on_accept);

  result.trajectory = problem.build(lbfgs.x);
  Eigen::VectorXd g;
  problem.evaluate(lbfgs.x, g, &result.final_report);
  result.iterations = lbfgs.iterations;
  result.converged = lbfgs.converged;
  result.line_search_failed = lbfgs.line_search_failed;
  return result;
}

CostReport evaluate_costs(const minco::MincoTrajectory& traj,
                          const world::DistanceField& df,
                          const mem::MetricEncodingMap& mem,
                          const OptConfig& config) {
  Problem problem{&df, &mem,
                  &config, traj.start_state(),
                  traj.end_state(), traj.segment_count(),
                  traj.order()};
  Eigen::VectorXd g;
  CostReport report;
  problem.evaluate(pack(traj), g, &report);
  return report;
}

}  // namespace gfm::optimizer
