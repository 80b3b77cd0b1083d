#include "coexplore/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace coex {

std::vector<bool> inflate_obstacles(const OccupancyGrid& map,
                                    double inflation) {
  const int w = map.width(), h = map.height();
  std::vector<bool> blocked(static_cast<std::size_t>(w) * h, false);
  const int span = static_cast<int>(std::ceil(inflation / map.resolution()));
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      if (map.at({row, col}) != CellState::Occupied) continue;
      for (int dr = -span; dr <= span; ++dr) {
        for (int dc = -span; dc <= span; ++dc) {
          const CellIndex c{row + dr, col + dc};
          if (!map.in_bounds(c)) continue;
          const double d = std::hypot(dr, dc) * map.resolution();
          if (d <= inflation + 1e-12)
            blocked[static_cast<std::size_t>(c.row) * w + c.col] = true;
        }
      }
    }
  }
  return blocked;
}

namespace {

struct QueueEntry {
  double cost;
  std::size_t order;  // insertion order for deterministic ties
  int cell;
};

struct QueueCompare {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.order > b.order;
  }
};

}  // namespace

PlannedPath plan_path(const OccupancyGrid& map, Vec2 start, Vec2 goal,
                      const PlannerParams& pp) {
  const int w = map.width(), h = map.height();
  const CellIndex sc = map.world_to_cell(start);
  const CellIndex gc = map.world_to_cell(goal);
  if (!map.in_bounds(sc) || map.at(sc) == CellState::Occupied)
    throw StartInObstacle("plan_path: start not in a free cell");
  if (!map.in_bounds(gc)) throw NoPath("plan_path: goal outside map");

  const std::vector<bool> blocked = inflate_obstacles(map, pp.inflation);
  const double res = map.resolution();
  const int start_k = sc.row * w + sc.col;
  const int goal_k = gc.row * w + gc.col;

  auto traversable = [&](int k) {
    if (k == start_k) return true;  // inflation never traps the start
    if (blocked[static_cast<std::size_t>(k)]) return false;
    return map.cells()[static_cast<std::size_t>(k)] != CellState::Occupied;
  };
  if (!traversable(goal_k)) throw NoPath("plan_path: goal cell blocked");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, inf);
  std::vector<int> prev(dist.size(), -1);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueCompare> open;
  std::size_t order = 0;
  dist[start_k] = 0.0;
  open.push({0.0, order++, start_k});

  // Fixed neighbor scan order for deterministic tie-breaking.
  static const int kDr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static const int kDc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    if (top.cost > dist[top.cell] + 1e-15) continue;
    if (top.cell == goal_k) break;
    const int row = top.cell / w, col = top.cell % w;
    for (int n = 0; n < 8; ++n) {
      const CellIndex nb{row + kDr[n], col + kDc[n]};
      if (!map.in_bounds(nb)) continue;
      const int nk = nb.row * w + nb.col;
      if (!traversable(nk)) continue;
      const bool diagonal = kDr[n] != 0 && kDc[n] != 0;
      double step = (diagonal ? std::sqrt(2.0) : 1.0) * res;
      if (map.at(nb) == CellState::Unknown) step *= pp.unknown_cost;
      const double nd = dist[top.cell] + step;
      if (nd < dist[nk] - 1e-15) {
        dist[nk] = nd;
        prev[nk] = top.cell;
        open.push({nd, order++, nk});
      }
    }
  }

  if (dist[goal_k] == inf) throw NoPath("plan_path: goal unreachable");

  PlannedPath path;
  path.cost = dist[goal_k];
  std::vector<int> cells;
  for (int k = goal_k; k != -1; k = prev[k]) cells.push_back(k);
  std::reverse(cells.begin(), cells.end());
  path.waypoints.reserve(cells.size());
  for (int k : cells)
    path.waypoints.push_back(map.cell_center({k / w, k % w}));
  return path;
}

std::optional<double> plan_path_cost(const OccupancyGrid& map, Vec2 start,
                                     Vec2 goal, const PlannerParams& pp) {
  try {
    return plan_path(map, start, goal, pp).cost;
  } catch (const NoPath&) {
    return std::nullopt;
  } catch (const StartInObstacle&) {
    return std::nullopt;
  }
}

}  // namespace coex
