#pragma once

#include "gfm/localizer/registration.hpp"
#include "gfm/minco/minco.hpp"
#include "gfm/scan/lidar.hpp"
#include "gfm/world/distance_field.hpp"
#include "gfm/world/occupancy_grid.hpp"

#include <cstdint>
#include <vector>

namespace gfm::localizer {

/// Gaussian range noise on each return plus an initial-guess drift model:
/// the guess for each sample carries the previous sample's estimation
/// error forward and adds fresh Gaussian noise.
struct NoiseModel {
  double range_sigma = 0.01;        // m
  double drift_sigma_xy = 0.02;     // m, per axis
  double drift_sigma_theta = 0.01;  // rad
  uint64_t seed = 0;
};

struct TrackConfig {
  double sample_dt = 0.1;  // s between evaluated poses
  scan::LidarConfig lidar;
  int gn_max_iterations = 30;
  double gn_tol = 1e-4;
  double gn_damping = 1e-6;
};

struct TrackSample {
  double time = 0.0;
  PoseSE2 true_pose;
  PoseSE2 estimate;
  double error = 0.0;  // Euclidean position error, m
  bool converged = false;
};

struct EvalReport {
  std::vector<TrackSample> samples;
  double mean_error = 0.0;
  double max_error = 0.0;
  double goal_deviation = 0.0;  // error at the final sample
  int convergence_failures = 0;
};

/// Samples the trajectory at a fixed period, simulates a noisy scan from
/// each true pose, localizes it against the distance field, and records
/// the per-sample position error. Non-convergence is recorded, never
/// thrown. Deterministic for a fixed seed.
EvalReport track_trajectory(const minco::MincoTrajectory& traj,
                            const world::OccupancyGrid& grid,
                            const world::DistanceField& df,
                            const NoiseModel& noise,
                            const TrackConfig& config);

}  // namespace gfm::localizer
