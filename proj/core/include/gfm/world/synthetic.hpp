#pragma once

#include "gfm/geometry.hpp"
#include "gfm/world/occupancy_grid.hpp"

#include <string>
#include <vector>

namespace gfm::world {

/// A built-in benchmark map plus a canonical start/goal pair for it.
struct DemoScenario {
  OccupancyGrid grid;
  PoseSE2 start;
  PoseSE2 goal;
};

/// Straight featureless corridor between two chambers, with a longer
/// detour passage below it lined with diamond pillars and sawtooth walls.
/// The corridor is localization-degraded; the detour is feature-rich.
OccupancyGrid make_corridor_detour_map(double resolution = 0.1);

/// Square walled room.
OccupancyGrid make_corner_room_map(double resolution = 0.1);

/// Long featureless corridor, much longer than a typical LiDAR range.
OccupancyGrid make_corridor_map(double resolution = 0.1);

/// Lookup by name: "corridor_detour", "corner_room", "corridor".
/// Throws ConfigError for unknown names.
DemoScenario demo_scenario(const std::string& name, double resolution = 0.1);

std::vector<std::string> demo_scenario_names();

}  // namespace gfm::world
