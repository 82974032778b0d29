#include "gfm/optimizer/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace gfm::optimizer {

namespace {

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;  // 1 / (y^T s)
};

// Two-loop recursion: applies the inverse Hessian estimate to g.
Eigen::VectorXd apply_inverse_hessian(const std::deque<CurvaturePair>& pairs,
                                      const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(pairs.size());
  for (std::size_t i = pairs.size(); i-- > 0;) {
    alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
    q -= alpha[i] * pairs[i].y;
  }
  if (!pairs.empty()) {
    const auto& last = pairs.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * pairs[i].y.dot(q);
    q += (alpha[i] - beta) * pairs[i].s;
  }
  return q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x,
                           const LbfgsParams& params,
                           const IterationCallback& on_accept) {
  LbfgsResult result;
  const auto n = x.size();
  Eigen::VectorXd grad(n);
  double f = objective(x, grad);

  std::deque<CurvaturePair> pairs;
  Eigen::VectorXd x_new(n), grad_new(n);

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    result.iterations = iter;
    if (grad.norm() < params.grad_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd dir = -apply_inverse_hessian(pairs, grad);
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      // Not a descent direction (possible under nonsmoothness): restart
      // from steepest descent.
      pairs.clear();
      dir = -grad;
      slope = grad.dot(dir);
    }

    // Lewis-Overton weak-Wolfe bracketing.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    double best_step = 0.0, best_f = f;
    for (int ls = 0; ls < params.max_line_search_steps; ++ls) {
      x_new = x + step * dir;
      f_new = objective(x_new, grad_new);
      if (f_new < best_f) {
        best_f = f_new;
        best_step = step;
      }
      if (f_new > f + params.wolfe_c1 * step * slope) {
        hi = step;  // sufficient decrease failed
      } else if (grad_new.dot(dir) < params.wolfe_c2 * slope) {
        lo = step;  // weak curvature failed
      } else {
        accepted = true;
        break;
      }
      step = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * step;
    }

    if (!accepted) {
      if (best_step > 0.0 && best_f < f) {
        // Take the best decreasing trial even without curvature.
        x_new = x + best_step * dir;
        f_new = objective(x_new, grad_new);
      } else {
        result.line_search_failed = true;
        break;
      }
    }

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      pairs.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(pairs.size()) > params.memory) {
        pairs.pop_front();
      }
    }

    const double prev_f = f;
    x.swap(x_new);
    grad.swap(grad_new);
    f = f_new;
    if (on_accept) {
      on_accept(iter + 1, x, f, grad);
    }
    if (std::abs(prev_f - f) <=
        params.rel_cost_tol * std::max(1.0, std::abs(prev_f))) {
      result.converged = true;
      result.iterations = iter + 1;
      break;
    }
  }

  result.x = std::move(x);
  result.f = f;
  return result;
}

}  // namespace gfm::optimizer
