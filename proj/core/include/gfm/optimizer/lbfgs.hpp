#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace gfm::optimizer {

/// Evaluates f(x) and writes the gradient into `grad`.
using Objective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Invoked once per accepted iterate.
using IterationCallback = std::function<void(
    int iteration, const Eigen::VectorXd& x, double f, const Eigen::VectorXd& grad)>;

struct LbfgsParams {
  int memory = 8;
  double wolfe_c1 = 1e-4;      // sufficient-decrease slope fraction
  double wolfe_c2 = 0.9;       // weak curvature slope fraction
  double grad_tol = 1e-5;      // terminate on gradient 2-norm below this
  double rel_cost_tol = 1e-8;  // terminate on relative decrease below this
  int max_iterations = 300;
  int max_line_search_steps = 60;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;          // a tolerance fired
  bool line_search_failed = false; // returned best-so-far after a stall
};

/// Limited-memory BFGS with the weak-Wolfe (Lewis-Overton) bracketing line
/// search, suitable for the nonsmooth max-penalty and piecewise-linear
/// interpolation terms. Accepted iterates never increase the objective;
/// curvature pairs that lose positive definiteness are skipped.
LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsParams& params,
                           const IterationCallback& on_accept = nullptr);

}  // namespace gfm::optimizer
