#pragma once

#include "gfm/geometry.hpp"
#include "gfm/mem/metric_map.hpp"
#include "gfm/search/heuristic_field.hpp"
#include "gfm/search/sigmoid.hpp"
#include "gfm/world/distance_field.hpp"

#include <cstdint>
#include <vector>

namespace gfm::search {

using PosePath = std::vector<PoseSE2>;

struct SearchConfig {
  double step_length = 0.2;        // m per motion primitive (2 cells)
  double arc_yaw_step = 0.4;       // rad, largest yaw change over one arc
  double rotation_step = kTwoPi / 16.0;  // rad, pure-rotation primitive
  int theta_bins = 32;             // closed-set yaw discretization
  double goal_xy_tol = 0.25;       // m
  double goal_yaw_tol = 0.35;      // rad
  double safety_margin = 0.42;     // m; clearance d plus a search buffer so
                                   // the smoothed trajectory stays feasible
  double fov = kPi / 2.0;          // rad, LiDAR FOV used for the step cost
  std::size_t max_nodes = 400000;  // expansion budget
  bool perception_aware = true;    // false: constant per-step cost (eps -> 0)
};

struct SearchStats {
  std::size_t nodes_expanded = 0;
  std::size_t admissibility_violations = 0;  // h > realized remaining g
  double max_admissibility_gap = 0.0;        // logged, never asserted
};

struct SearchResult {
  PosePath path;      // start first, goal-reaching pose last
  double g_cost = 0;  // accumulated step cost of the returned path
  SearchStats stats;
};

/// Perception-aware hybrid A*: expands omnidirectional motion primitives
/// (arcs at five yaw rates, lateral steps, pure rotations), accumulating
/// sigmoid(metric at the new pose) as the actual cost and reading the
/// heuristic from the pre-search field. All poses must keep
/// config.safety_margin of clearance. Deterministic for fixed inputs.
/// Throws NoPathError / IterationLimitError / ConfigError.
SearchResult hybrid_astar(const world::DistanceField& df,
                          const mem::MetricEncodingMap& mem,
                          const HeuristicField& hfield, const PoseSE2& start,
                          const PoseSE2& goal, const SigmoidParams& sigmoid,
                          const SearchConfig& config);

}  // namespace gfm::search
