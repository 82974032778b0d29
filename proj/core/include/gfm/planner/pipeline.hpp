#pragma once

#include "gfm/eval/stats.hpp"
#include "gfm/localizer/tracking.hpp"
#include "gfm/mem/mem_io.hpp"
#include "gfm/mem/metric_map.hpp"
#include "gfm/minco/minco.hpp"
#include "gfm/optimizer/optimize.hpp"
#include "gfm/search/heuristic_field.hpp"
#include "gfm/search/hybrid_astar.hpp"
#include "gfm/search/keyposes.hpp"
#include "gfm/world/distance_field.hpp"
#include "gfm/world/map_io.hpp"
#include "gfm/world/occupancy_grid.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gfm::planner {

/// Full configuration of one planning/evaluation run. Every field has a
/// default; JSON configs override selectively.
struct PlanConfig {
  // Map source: a raster path with its JSON sidecar, or "demo:<name>" for
  // a built-in benchmark map.
  std::string map = "demo:corridor_detour";
  double demo_resolution = 0.1;
  // Optional prebuilt MEM (PNG path). Empty = build in process.
  std::string mem_path;

  std::optional<PoseSE2> start;  // default: demo scenario endpoints
  std::optional<PoseSE2> goal;

  scan::LidarConfig lidar;  // fov 90 deg, n_rays, max_range
  mem::MemBuildConfig mem_build;
  search::SigmoidParams sigmoid;
  search::SearchConfig search;
  search::KeyposeConfig keyposes;
  optimizer::OptConfig opt;
  localizer::NoiseModel noise;
  localizer::TrackConfig track;

  uint64_t seed = 1;
  bool perception_aware_search = true;  // false = plain hybrid A* arm

  static PlanConfig from_json_file(const std::string& path);
  static PlanConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

/// Map-derived state shared across runs: grid, distance field, MEM.
struct Problem {
  world::OccupancyGrid grid;
  world::DistanceField df;
  mem::MetricEncodingMap mem;
  PoseSE2 start;
  PoseSE2 goal;
};

/// Resolves the map reference, builds or loads the MEM, and fills in the
/// endpoints. Throws ConfigError if a supplied MEM was built from a
/// different map, or if an endpoint is invalid.
Problem load_problem(const PlanConfig& config);

struct PlanOutcome {
  search::SearchResult search;
  std::vector<Eigen::Vector3d> keyposes;
  minco::MincoTrajectory initial_trajectory;
  optimizer::OptimizeResult optimized;
  double presearch_seconds = 0.0;
  double search_seconds = 0.0;
  double optimize_seconds = 0.0;
  double total_seconds = 0.0;
};

/// The planning chain: heuristic pre-search, hybrid A*, key-pose
/// extraction, time allocation, coefficient construction, optimization.
PlanOutcome plan(const Problem& problem, const PlanConfig& config);

/// Initial segment durations: trapezoidal velocity profile between
/// consecutive key poses, cruising at half the velocity limit.
Eigen::VectorXd allocate_times(const std::vector<Eigen::Vector3d>& keyposes,
                               const optimizer::OptConfig& opt);

// --- Artifact serialization (field names documented in the README) ---

void write_path_json(const std::string& path, const search::SearchResult& r);
void write_trajectory_json(const std::string& path,
                           const minco::MincoTrajectory& traj);
minco::MincoTrajectory read_trajectory_json(const std::string& path);
void write_eval_json(const std::string& path, const localizer::EvalReport& r);
void write_eval_csv(const std::string& path, const localizer::EvalReport& r);
void write_cost_history_csv(const std::string& path,
                            const std::vector<optimizer::CostReport>& history);

struct AblationArm {
  std::string name;
  bool failed = false;
  std::string failure;
  double plan_seconds = 0.0;
  std::vector<double> mean_errors;     // one per seed
  std::vector<double> goal_deviations; // one per seed
  double mean_error = 0.0;
  eval::BootstrapCI error_ci;
  double mean_goal_deviation = 0.0;
  eval::BootstrapCI goal_ci;
};

struct AblationReport {
  int seeds = 0;
  uint64_t base_seed = 0;
  std::vector<AblationArm> arms;  // complete, no_perception_search, no_localization_cost
};

/// Three-arm ablation: the full planner, the plain-search arm, and the
/// no-localization-cost arm. Each arm plans once (planning is
/// deterministic) and is evaluated under `seeds` independent noise seeds;
/// seed evaluations run on a worker pool and aggregate in seed order.
AblationReport run_ablation(const Problem& problem, const PlanConfig& base,
                            int seeds);

std::string ablation_report_json(const AblationReport& r);

}  // namespace gfm::planner
