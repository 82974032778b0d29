#include "gfm/localizer/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gfm::localizer {

EvalReport track_trajectory(const minco::MincoTrajectory& traj,
                            const world::OccupancyGrid& grid,
                            const world::DistanceField& df,
                            const NoiseModel& noise,
                            const TrackConfig& config) {
  EvalReport report;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> range_noise(0.0, noise.range_sigma);
  std::normal_distribution<double> drift_xy(0.0, noise.drift_sigma_xy);
  std::normal_distribution<double> drift_theta(0.0, noise.drift_sigma_theta);

  const double total = traj.total_time();
  std::vector<double> sample_times;
  for (double t = 0.0; t < total; t += config.sample_dt) {
    sample_times.push_back(t);
  }
  sample_times.push_back(total);

  Eigen::Vector3d carried_error = Eigen::Vector3d::Zero();

  for (const double t : sample_times) {
    TrackSample sample;
    sample.time = t;
    const Eigen::Vector3d p = traj.evaluate(t, 0);
    sample.true_pose = PoseSE2(p.x(), p.y(), p.z());

    // Measurement: noisy ranges along the body-frame ray directions.
    Registration reg;
    reg.field = &df;
    bool scan_ok = true;
    try {
      const scan::Scan s = simulate_scan(grid, sample.true_pose, config.lidar);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s.hits[i].hit) continue;
        const double r = s.hits[i].range + range_noise(rng);
        const double a = s.ray_angles[i];
        reg.body_points.emplace_back(r * std::cos(a), r * std::sin(a));
      }
    } catch (const std::invalid_argument&) {
      scan_ok = false;  // pose strayed into an obstacle; count as failure
    }

    const Eigen::Vector3d guess =
        p + carried_error +
        Eigen::Vector3d(drift_xy(rng), drift_xy(rng), drift_theta(rng));
    reg.estimate = PoseSE2(guess.x(), guess.y(), guess.z());

    if (scan_ok && reg.body_points.size() >= 3) {
      const LocalizeResult loc = gauss_newton_localize(
          reg, config.gn_max_iterations, config.gn_tol, config.gn_damping);
      sample.estimate = loc.pose;
      sample.converged = loc.converged;
    } else {
      sample.estimate = reg.estimate;
      sample.converged = false;
    }

    sample.error =
        (sample.estimate.position() - sample.true_pose.position()).norm();
    if (!sample.converged) {
      ++report.convergence_failures;
    }
    carried_error =
        Eigen::Vector3d(sample.estimate.x - sample.true_pose.x,
                        sample.estimate.y - sample.true_pose.y,
                        normalize_angle(sample.estimate.theta -
                                        sample.true_pose.theta));
    report.samples.push_back(sample);
  }

  double sum = 0.0;
  for (const auto& s : report.samples) {
    sum += s.error;
    report.max_error = std::max(report.max_error, s.error);
  }
  report.mean_error = report.samples.empty() ? 0.0 : sum / report.samples.size();
  report.goal_deviation =
      report.samples.empty() ? 0.0 : report.samples.back().error;
  return report;
}

}  // namespace gfm::localizer
