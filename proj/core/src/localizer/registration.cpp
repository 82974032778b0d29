#include "gfm/localizer/registration.hpp"

#include <Eigen/Dense>

namespace gfm::localizer {

ObjectiveEval objective_and_gradient(const Registration& reg) {
  ObjectiveEval out;
  const Eigen::Matrix2d rot = reg.estimate.rotation();
  const Eigen::Matrix2d drot = reg.estimate.rotation_derivative();
  const Eigen::Vector2d t = reg.estimate.position();
  for (const Eigen::Vector2d& z : reg.body_points) {
    const Eigen::Vector2d q = t + rot * z;
    const world::FieldSample s = reg.field->sample(q);
    const Eigen::Vector2d dtheta = drot * z;
    Eigen::Vector3d a;
    a.head<2>() = s.gradient;
    a.z() = dtheta.dot(s.gradient);
    out.f += 0.5 * s.distance * s.distance;
    out.gradient += s.distance * a;
  }
  return out;
}

HessianSplit hessian_analysis(const Registration& reg, double fd_step) {
  HessianSplit out;

  out.h1.setZero();
  const Eigen::Matrix2d rot = reg.estimate.rotation();
  const Eigen::Matrix2d drot = reg.estimate.rotation_derivative();
  const Eigen::Vector2d t = reg.estimate.position();
  for (const Eigen::Vector2d& z : reg.body_points) {
    const Eigen::Vector2d q = t + rot * z;
    const world::FieldSample s = reg.field->sample(q);
    Eigen::Vector3d a;
    a.head<2>() = s.gradient;
    a.z() = (drot * z).dot(s.gradient);
    out.h1 += a * a.transpose();
  }

  for (int k = 0; k < 3; ++k) {
    Registration plus = reg;
    Registration minus = reg;
    Eigen::Vector3d p = reg.estimate.vec();
    Eigen::Vector3d dp = Eigen::Vector3d::Zero();
    dp(k) = fd_step;
    plus.estimate = PoseSE2(p.x() + dp.x(), p.y() + dp.y(), p.z() + dp.z());
    minus.estimate = PoseSE2(p.x() - dp.x(), p.y() - dp.y(), p.z() - dp.z());
    out.h_total_fd.col(k) = (objective_and_gradient(plus).gradient -
                             objective_and_gradient(minus).gradient) /
                            (2.0 * fd_step);
  }
  out.residual = out.h_total_fd - out.h1;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(out.h1);
  out.h1_eigenvalues = eig.eigenvalues();
  out.h1_eigenvectors = eig.eigenvectors();
  return out;
}

LocalizeResult gauss_newton_localize(const Registration& reg,
                                     int max_iterations, double tol,
                                     double damping) {
  LocalizeResult out;
  Registration work = reg;
  double prev_f = std::numeric_limits<double>::infinity();
  int growing = 0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    out.iterations = iter + 1;

    const Eigen::Matrix2d rot = work.estimate.rotation();
    const Eigen::Matrix2d drot = work.estimate.rotation_derivative();
    const Eigen::Vector2d t = work.estimate.position();
    Eigen::Matrix3d h1 = Eigen::Matrix3d::Zero();
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    double f = 0.0;
    for (const Eigen::Vector2d& z : work.body_points) {
      const Eigen::Vector2d q = t + rot * z;
      const world::FieldSample s = work.field->sample(q);
      Eigen::Vector3d a;
      a.head<2>() = s.gradient;
      a.z() = (drot * z).dot(s.gradient);
      h1 += a * a.transpose();
      grad += s.distance * a;
      f += 0.5 * s.distance * s.distance;
    }

    if (f > prev_f) {
      if (++growing >= 5) {
        out.pose = work.estimate;
        out.converged = false;
        return out;
      }
    } else {
      growing = 0;
    }
    prev_f = f;

    const Eigen::Vector3d step =
        (h1 + damping * Eigen::Matrix3d::Identity()).ldlt().solve(grad);
    work.estimate = PoseSE2(work.estimate.x - step.x(),
                            work.estimate.y - step.y(),
                            work.estimate.theta - step.z());
    if (step.norm() < tol) {
      out.pose = work.estimate;
      out.converged = true;
      return out;
    }
  }
  out.pose = work.estimate;
  out.converged = false;
  return out;
}

}  // namespace gfm::localizer
