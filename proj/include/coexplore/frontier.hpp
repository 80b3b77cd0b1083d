#pragma once

#include <vector>

#include "coexplore/grid.hpp"

namespace coex {

struct FrontierPoint {
  Vec2 position;         // world meters
  int source_agent = 0;
};

struct FilterParams {
  double rad = 1.0;          // circle radius, meters
  double per_unk = 60.0;     // unknown-percentage threshold
  int min_pts = 0;
  int max_pts = 10;
  double rad_step = 0.25;
  double per_unk_step = 10.0;
  int max_adapt_iters = 8;
};

struct OutOfBounds : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cluster representatives of Free cells 8-adjacent to Unknown cells.
// Frontier cells are clustered by 8-connectivity; each cluster yields the
// frontier cell nearest its centroid. Output ordered by (row, col) of the
// representative.
std::vector<FrontierPoint> detect_frontiers(const OccupancyGrid& local,
                                            int source_agent = 0);

// Percentage of Unknown cells among cells whose center lies within rad of p
// (discretized circle, center-distance membership).
double unknown_percentage(const OccupancyGrid& merged, Vec2 p, double rad);

// Keep points with unknown_percentage >= per_unk whose merged-map cell is not
// Occupied. Points outside the merged map are dropped. Input order preserved.
std::vector<FrontierPoint> filter_points(const std::vector<FrontierPoint>& points,
                                         const OccupancyGrid& merged,
                                         const FilterParams& fp);

struct AdaptiveFilterResult {
  std::vector<FrontierPoint> points;
  FilterParams params;  // params in force for the final pass
  int passes = 1;
};

// filter_points with the RAD / PER_UNK adaptation loop: too many points
// widens rad, too few lowers per_unk (floored at 0). Bounded by
// max_adapt_iters refilter passes. The returned params persist to the next
// cycle.
AdaptiveFilterResult adaptive_filter(const std::vector<FrontierPoint>& points,
                                     const OccupancyGrid& merged,
                                     const FilterParams& fp);

}  // namespace coex
