#pragma once

#include <optional>
#include <vector>

#include "coexplore/grid.hpp"

namespace coex {

struct PlannerParams {
  double inflation = 0.25;   // obstacle dilation radius, meters
  double unknown_cost = 2.0; // cost multiplier for Unknown cells
};

struct NoPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StartInObstacle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlannedPath {
  std::vector<Vec2> waypoints;  // cell centers, start to goal inclusive
  double cost = 0.0;            // meters (unknown cells weighted)
};

// Traversability raster after obstacle inflation. Exposed so the cost model
// can be shared with the brute-force oracle in tests.
std::vector<bool> inflate_obstacles(const OccupancyGrid& map, double inflation);

// Shortest 8-connected path over inflated-free cells. Unknown cells cost
// unknown_cost x the step length; diagonal steps cost sqrt(2) x resolution.
// The start cell is always traversable. Deterministic tie-breaking.
PlannedPath plan_path(const OccupancyGrid& map, Vec2 start, Vec2 goal,
                      const PlannerParams& pp);

// plan_path cost only, as an optional: nullopt instead of NoPath.
std::optional<double> plan_path_cost(const OccupancyGrid& map, Vec2 start,
                                     Vec2 goal, const PlannerParams& pp);

}  // namespace coex
