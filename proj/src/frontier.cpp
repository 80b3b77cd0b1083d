#include "coexplore/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace coex {

namespace {

bool is_frontier_cell(const OccupancyGrid& g, CellIndex c) {
  if (g.at(c) != CellState::Free) return false;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const CellIndex nb{c.row + dr, c.col + dc};
      if (g.in_bounds(nb) && g.at(nb) == CellState::Unknown) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<FrontierPoint> detect_frontiers(const OccupancyGrid& local,
                                            int source_agent) {
  const int w = local.width(), h = local.height();
  std::vector<bool> frontier(static_cast<std::size_t>(w) * h, false);
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col)
      if (is_frontier_cell(local, {row, col}))
        frontier[static_cast<std::size_t>(row) * w + col] = true;

  std::vector<bool> visited(frontier.size(), false);
  std::vector<CellIndex> reps;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const std::size_t k = static_cast<std::size_t>(row) * w + col;
      if (!frontier[k] || visited[k]) continue;
      // Flood the cluster (8-connected).
      std::vector<CellIndex> cluster;
      std::deque<CellIndex> queue{{row, col}};
      visited[k] = true;
      while (!queue.empty()) {
        const CellIndex c = queue.front();
        queue.pop_front();
        cluster.push_back(c);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const CellIndex nb{c.row + dr, c.col + dc};
            if (!local.in_bounds(nb)) continue;
            const std::size_t kn = static_cast<std::size_t>(nb.row) * w + nb.col;
            if (frontier[kn] && !visited[kn]) {
              visited[kn] = true;
              queue.push_back(nb);
            }
          }
        }
      }
      double cr = 0, cc = 0;
      for (CellIndex c : cluster) {
        cr += c.row;
        cc += c.col;
      }
      cr /= cluster.size();
      cc /= cluster.size();
      // Representative: frontier cell nearest the centroid, ties by (row, col).
      CellIndex best = cluster.front();
      double best_d = std::numeric_limits<double>::infinity();
      std::sort(cluster.begin(), cluster.end(), [](CellIndex a, CellIndex b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
      });
      for (CellIndex c : cluster) {
        const double d = std::hypot(c.row - cr, c.col - cc);
        if (d < best_d - 1e-12) {
          best_d = d;
          best = c;
        }
      }
      reps.push_back(best);
    }
  }
  std::sort(reps.begin(), reps.end(), [](CellIndex a, CellIndex b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<FrontierPoint> out;
  out.reserve(reps.size());
  for (CellIndex c : reps)
    out.push_back({local.cell_center(c), source_agent});
  return out;
}

double unknown_percentage(const OccupancyGrid& merged, Vec2 p, double rad) {
  if (!merged.contains(p))
    throw OutOfBounds("unknown_percentage: point outside merged map");
  const double res = merged.resolution();
  const CellIndex center = merged.world_to_cell(p);
  const int span = static_cast<int>(std::ceil(rad / res)) + 1;
  std::size_t total = 0, unknown = 0;
  for (int row = center.row - span; row <= center.row + span; ++row) {
    for (int col = center.col - span; col <= center.col + span; ++col) {
      const CellIndex c{row, col};
      if (!merged.in_bounds(c)) continue;
      if (distance(merged.cell_center(c), p) > rad + 1e-12) continue;
      ++total;
      if (merged.at(c) == CellState::Unknown) ++unknown;
    }
  }
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(unknown) / static_cast<double>(total);
}

std::vector<FrontierPoint> filter_points(const std::vector<FrontierPoint>& points,
                                         const OccupancyGrid& merged,
                                         const FilterParams& fp) {
  std::vector<FrontierPoint> kept;
  for (const FrontierPoint& pt : points) {
    const CellIndex c = merged.world_to_cell(pt.position);
    if (!merged.in_bounds(c)) continue;
    if (merged.at(c) == CellState::Occupied) continue;
    if (unknown_percentage(merged, pt.position, fp.rad) >= fp.per_unk - 1e-12)
      kept.push_back(pt);
  }
  return kept;
}

AdaptiveFilterResult adaptive_filter(const std::vector<FrontierPoint>& points,
                                     const OccupancyGrid& merged,
                                     const FilterParams& fp) {
  AdaptiveFilterResult res;
  res.params = fp;
  res.points = filter_points(points, merged, res.params);
  res.passes = 1;
  while (res.passes < fp.max_adapt_iters) {
    const int n = static_cast<int>(res.points.size());
    if (n > fp.max_pts) {
      res.params.rad += res.params.rad_step;
    } else if (n < fp.min_pts && res.params.per_unk > 0.0) {
      res.params.per_unk =
          std::max(0.0, res.params.per_unk - res.params.per_unk_step);
    } else {
      break;
    }
    res.points = filter_points(points, merged, res.params);
    ++res.passes;
  }
  return res;
}

}  // namespace coex
