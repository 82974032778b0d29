#pragma once

#include "gfm/search/hybrid_astar.hpp"

#include <Eigen/Core>

#include <vector>

namespace gfm::search {

struct KeyposeConfig {
  double rdp_epsilon = 0.08;  // m, max perpendicular deviation kept
  double max_spacing = 0.8;   // m, cap between consecutive key poses
};

/// Selects key poses from a search path: endpoints always, interior poses
/// by polyline simplification plus a maximum-spacing cap. Yaw values come
/// from the path and are unwrapped so consecutive entries never jump by
/// 2*pi; entries are therefore plain (x, y, theta) vectors rather than
/// normalized poses. Requires path.size() >= 1.
std::vector<Eigen::Vector3d> extract_keyposes(const PosePath& path,
                                              const KeyposeConfig& config);

}  // namespace gfm::search
