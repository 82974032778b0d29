#pragma once

#include "gfm/mem/metric_map.hpp"
#include "gfm/minco/minco.hpp"
#include "gfm/optimizer/costs.hpp"
#include "gfm/optimizer/opt_config.hpp"
#include "gfm/world/distance_field.hpp"

#include <vector>

namespace gfm::optimizer {

struct OptimizeResult {
  minco::MincoTrajectory trajectory;
  CostReport final_report;
  std::vector<CostReport> history;  // one entry per accepted iterate
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
};

/// Unconstrained minimization of lambda_l*J_l + lambda_e*J_e + lambda_g*J_G
/// over the interior waypoints and warped segment times of a trajectory.
/// The boundary states and segment count of `initial` are preserved.
OptimizeResult optimize(const minco::MincoTrajectory& initial,
                        const world::DistanceField& df,
                        const mem::MetricEncodingMap& mem,
                        const OptConfig& config);

/// Cost breakdown of a trajectory without optimizing (gradient fields of
/// the report are zero).
CostReport evaluate_costs(const minco::MincoTrajectory& traj,
                          const world::DistanceField& df,
                          const mem::MetricEncodingMap& mem,
                          const OptConfig& config);

}  // namespace gfm::optimizer
