#pragma once

#include "gfm/io/image.hpp"
#include "gfm/localizer/tracking.hpp"
#include "gfm/mem/metric_map.hpp"
#include "gfm/minco/minco.hpp"
#include "gfm/search/hybrid_astar.hpp"
#include "gfm/world/occupancy_grid.hpp"

#include <optional>
#include <string>

namespace gfm::planner {

/// Full-window metric per cell as a blue-to-red heatmap (hotter = more
/// degraded). Pure function of the MEM; identical inputs give identical
/// pixels.
io::ImageRgb8 render_mem_heatmap(const mem::MetricEncodingMap& mem);

/// Scene overlay as SVG: obstacles, optional searched path, optional
/// trajectory polyline with yaw ticks, optional localization-error
/// circles. Deterministic text output.
std::string render_scene_svg(
    const world::OccupancyGrid& grid,
    const search::PosePath* path = nullptr,
    const minco::MincoTrajectory* traj = nullptr,
    const localizer::EvalReport* eval = nullptr);

}  // namespace gfm::planner
