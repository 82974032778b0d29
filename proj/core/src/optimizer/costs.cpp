#include "gfm/optimizer/costs.hpp"

#include "gfm/search/sigmoid.hpp"

#include <algorithm>
#include <cmath>

namespace gfm::optimizer {

namespace {

double trapezoid_weight(int j, int k) {
  return (j == 0 || j == k) ? 0.5 : 1.0;
}

}  // namespace

CostTerms localization_cost(const minco::MincoTrajectory& traj,
                            const mem::MetricEncodingMap& mem,
                            const OptConfig& config) {
  const int k_seg = traj.segment_count();
  const int s = traj.order();
  const int ki = std::max(2, config.samples_per_segment);
  const search::SigmoidParams sig{config.sigmoid_epsilon, mem::kAngleCount};

  CostTerms out;
  out.grad_coeffs = Eigen::MatrixX3d::Zero(2 * s * k_seg, 3);
  out.grad_times = Eigen::VectorXd::Zero(k_seg);

  for (int i = 0; i < k_seg; ++i) {
    const double ti = traj.times()(i);
    const double dt = ti / ki;
    for (int j = 0; j <= ki; ++j) {
      const double eta = trapezoid_weight(j, ki);
      const double tau = dt * j;
      const Eigen::Vector3d p = traj.evaluate_local(i, tau, 0);
      const mem::GfmSample m =
          gfm_continuous(mem, PoseSE2(p.x(), p.y(), p.z()), config.fov);
      const double sv = search::sigmoid(m.value, sig);
      const double sd = search::sigmoid_derivative(m.value, sig);
      const Eigen::Vector3d& delta = m.gradient;

      out.value += dt * eta * sv;

      const Eigen::VectorXd beta = minco::MincoTrajectory::basis(tau, 0, s);
      out.grad_coeffs.middleRows(2 * s * i, 2 * s) +=
          (dt * eta * sd) * beta * delta.transpose();

      const Eigen::Vector3d vel = traj.evaluate_local(i, tau, 1);
      out.grad_times(i) += eta * sv / ki +
                           (static_cast<double>(j) * ti * eta * sd) /
                               (static_cast<double>(ki) * ki) *
                               delta.dot(vel);
    }
  }
  return out;
}

CostTerms energy_cost(const minco::MincoTrajectory& traj,
                      const OptConfig& config) {
  CostTerms out;
  out.value = traj.control_energy() + config.rho * traj.times().sum();
  traj.control_energy_gradient(out.grad_coeffs, out.grad_times);
  out.grad_times.array() += config.rho;
  return out;
}

CostTerms penalty_cost(const minco::MincoTrajectory& traj,
                       const world::DistanceField& df, const OptConfig& config,
                       ViolationReport* violations) {
  const int k_seg = traj.segment_count();
  const int s = traj.order();
  const int ki = std::max(2, config.samples_per_segment);
  const double d = config.safety_distance;
  const double v1sq = config.v_max * config.v_max;
  const double v2sq = config.a_max * config.a_max;
  const double w1sq = config.omega_max * config.omega_max;
  const double w2sq = config.alpha_max * config.alpha_max;

  CostTerms out;
  out.grad_coeffs = Eigen::MatrixX3d::Zero(2 * s * k_seg, 3);
  out.grad_times = Eigen::VectorXd::Zero(k_seg);
  ViolationReport rep;

  for (int i = 0; i < k_seg; ++i) {
    const double ti = traj.times()(i);
    const double dt = ti / ki;
    for (int j = 0; j <= ki; ++j) {
      const double eta = trapezoid_weight(j, ki);
      const double tau = dt * j;
      const Eigen::Vector3d pos = traj.evaluate_local(i, tau, 0);
      const Eigen::Vector3d vel = traj.evaluate_local(i, tau, 1);
      const Eigen::Vector3d acc = traj.evaluate_local(i, tau, 2);
      const Eigen::Vector3d jerk = traj.evaluate_local(i, tau, 3);

      double g_sum = 0.0;
      Eigen::Vector3d dg_dpos = Eigen::Vector3d::Zero();
      Eigen::Vector3d dg_dvel = Eigen::Vector3d::Zero();
      Eigen::Vector3d dg_dacc = Eigen::Vector3d::Zero();

      // Clearance: max(d - E, 0)^s.
      const world::FieldSample field = df.sample(pos.head<2>());
      const double deficit = d - field.distance;
      if (deficit > 0.0) {
        g_sum += std::pow(deficit, s);
        const double dpen = -s * std::pow(deficit, s - 1);
        dg_dpos.head<2>() += dpen * field.gradient;
        rep.max_clearance_deficit = std::max(rep.max_clearance_deficit, deficit);
      }

      // Translational velocity and acceleration, squared-norm overshoots.
      const double vsq = vel.head<2>().squaredNorm();
      if (vsq > v1sq) {
        g_sum += vsq - v1sq;
        dg_dvel.head<2>() += 2.0 * vel.head<2>();
        rep.max_velocity_overshoot = std::max(
            rep.max_velocity_overshoot, std::sqrt(vsq) - config.v_max);
      }
      const double asq = acc.head<2>().squaredNorm();
      if (asq > v2sq) {
        g_sum += asq - v2sq;
        dg_dacc.head<2>() += 2.0 * acc.head<2>();
        rep.max_accel_overshoot =
            std::max(rep.max_accel_overshoot, std::sqrt(asq) - config.a_max);
      }

      // Yaw rate and yaw acceleration.
      const double wsq = vel.z() * vel.z();
      if (wsq > w1sq) {
        g_sum += wsq - w1sq;
        dg_dvel.z() += 2.0 * vel.z();
        rep.max_omega_overshoot = std::max(
            rep.max_omega_overshoot, std::abs(vel.z()) - config.omega_max);
      }
      const double alsq = acc.z() * acc.z();
      if (alsq > w2sq) {
        g_sum += alsq - w2sq;
        dg_dacc.z() += 2.0 * acc.z();
        rep.max_alpha_overshoot = std::max(
            rep.max_alpha_overshoot, std::abs(acc.z()) - config.alpha_max);
      }

      out.value += dt * eta * g_sum;

      if (g_sum > 0.0) {
        const double scale = dt * eta;
        const Eigen::MatrixX3d contrib =
            minco::MincoTrajectory::basis(tau, 0, s) * dg_dpos.transpose() +
            minco::MincoTrajectory::basis(tau, 1, s) * dg_dvel.transpose() +
            minco::MincoTrajectory::basis(tau, 2, s) * dg_dacc.transpose();
        out.grad_coeffs.middleRows(2 * s * i, 2 * s) += scale * contrib;

        // Sample points move with t_i: dG/dtau times dtau/dt_i = j/ki.
        const double dg_dtau =
            dg_dpos.dot(vel) + dg_dvel.dot(acc) + dg_dacc.dot(jerk);
        out.grad_times(i) += eta * g_sum / ki +
                             scale * dg_dtau * (static_cast<double>(j) / ki);
      }
    }
  }

  if (violations) {
    *violations = rep;
  }
  return out;
}

}  // namespace gfm::optimizer
