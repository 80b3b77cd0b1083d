#include <doctest.h>

#include <cmath>
#include <random>

#include "coexplore/planner.hpp"

using namespace coex;

namespace {

// Bellman-Ford style relaxation oracle over the same cost model.
std::optional<double> brute_force_cost(const OccupancyGrid& map, Vec2 start,
                                       Vec2 goal, const PlannerParams& pp) {
  const int w = map.width(), h = map.height();
  const std::vector<bool> blocked = inflate_obstacles(map, pp.inflation);
  const CellIndex sc = map.world_to_cell(start);
  const CellIndex gc = map.world_to_cell(goal);
  const int start_k = sc.row * w + sc.col;
  auto traversable = [&](int k) {
    if (k == start_k) return true;
    if (blocked[static_cast<std::size_t>(k)]) return false;
    return map.cells()[static_cast<std::size_t>(k)] != CellState::Occupied;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, inf);
  dist[start_k] = 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int row = 0; row < h; ++row) {
      for (int col = 0; col < w; ++col) {
        const int k = row * w + col;
        if (dist[k] == inf) continue;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (!dr && !dc) continue;
            const CellIndex nb{row + dr, col + dc};
            if (!map.in_bounds(nb)) continue;
            const int nk = nb.row * w + nb.col;
            if (!traversable(nk)) continue;
            double step = (dr && dc ? std::sqrt(2.0) : 1.0) * map.resolution();
            if (map.at(nb) == CellState::Unknown) step *= pp.unknown_cost;
            if (dist[k] + step < dist[nk] - 1e-15) {
              dist[nk] = dist[k] + step;
              changed = true;
            }
          }
        }
      }
    }
  }
  const int goal_k = gc.row * w + gc.col;
  if (dist[goal_k] == inf) return std::nullopt;
  return dist[goal_k];
}

}  // namespace

TEST_CASE("straight corridor path has near-Euclidean length") {
  OccupancyGrid map(20, 3, 1.0, {0, 0}, CellState::Free);
  PlannerParams pp;
  pp.inflation = 0.0;
  const PlannedPath p = plan_path(map, {0.5, 1.5}, {18.5, 1.5}, pp);
  CHECK(p.cost == doctest::Approx(18.0));
  CHECK(p.waypoints.back().x == doctest::Approx(18.5));
}

TEST_CASE("goal behind a full wall is unreachable") {
  OccupancyGrid map(11, 11, 1.0, {0, 0}, CellState::Free);
  for (int row = 0; row < 11; ++row) map.set({row, 5}, CellState::Occupied);
  PlannerParams pp;
  CHECK_THROWS_AS(plan_path(map, {1.5, 5.5}, {9.5, 5.5}, pp), NoPath);
  CHECK_FALSE(plan_path_cost(map, {1.5, 5.5}, {9.5, 5.5}, pp).has_value());
}

TEST_CASE("start in an obstacle is rejected") {
  OccupancyGrid map(5, 5, 1.0, {0, 0}, CellState::Free);
  map.set({2, 2}, CellState::Occupied);
  CHECK_THROWS_AS(plan_path(map, {2.5, 2.5}, {4.5, 4.5}, PlannerParams{}),
                  StartInObstacle);
}

TEST_CASE("detour around a block matches the oracle") {
  OccupancyGrid map(15, 15, 1.0, {0, 0}, CellState::Free);
  for (int row = 4; row <= 10; ++row)
    for (int col = 6; col <= 8; ++col) map.set({row, col}, CellState::Occupied);
  PlannerParams pp;
  pp.inflation = 0.0;
  const PlannedPath p = plan_path(map, {2.5, 7.5}, {12.5, 7.5}, pp);
  const auto oracle = brute_force_cost(map, {2.5, 7.5}, {12.5, 7.5}, pp);
  REQUIRE(oracle.has_value());
  CHECK(p.cost == doctest::Approx(*oracle));
  CHECK(p.cost > 10.0);  // must detour
}

TEST_CASE("unknown cells are traversable at a higher cost") {
  OccupancyGrid map(10, 3, 1.0, {0, 0});
  for (int col = 0; col < 10; ++col) map.set({1, col}, CellState::Free);
  // Make columns 4..6 Unknown in the middle row.
  for (int col = 4; col <= 6; ++col) map.set({1, col}, CellState::Unknown);
  PlannerParams pp;
  pp.inflation = 0.0;
  pp.unknown_cost = 2.0;
  // Path must cross the unknown stretch; rows 0/2 are Unknown too, and more
  // expensive diagonally, so the straight crossing costs 6 + 3*2 = 12... the
  // straight line is 9 steps of which 3 are unknown: 6*1 + 3*2 = 12.
  const PlannedPath p = plan_path(map, {0.5, 1.5}, {9.5, 1.5}, pp);
  CHECK(p.cost == doctest::Approx(12.0));
}

TEST_CASE("inflation closes narrow gaps") {
  OccupancyGrid map(11, 11, 1.0, {0, 0}, CellState::Free);
  for (int row = 0; row < 11; ++row)
    if (row != 5) map.set({row, 5}, CellState::Occupied);
  PlannerParams pp;
  pp.inflation = 0.0;
  CHECK_NOTHROW(plan_path(map, {1.5, 5.5}, {9.5, 5.5}, pp));
  pp.inflation = 1.0;  // the one-cell gap is swallowed
  CHECK_THROWS_AS(plan_path(map, {1.5, 5.5}, {9.5, 5.5}, pp), NoPath);
}

TEST_CASE("planner cost equals the brute-force oracle on random grids") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 100; ++trial) {
    OccupancyGrid map(30, 30, 0.5, {0, 0});
    for (int row = 0; row < 30; ++row) {
      for (int col = 0; col < 30; ++col) {
        const double r = u(rng);
        map.set({row, col}, r < 0.2   ? CellState::Occupied
                            : r < 0.6 ? CellState::Free
                                      : CellState::Unknown);
      }
    }
    PlannerParams pp;
    pp.inflation = u(rng) < 0.5 ? 0.0 : 0.5;
    const Vec2 start{0.25 + std::floor(u(rng) * 30) * 0.5,
                     0.25 + std::floor(u(rng) * 30) * 0.5};
    const Vec2 goal{0.25 + std::floor(u(rng) * 30) * 0.5,
                    0.25 + std::floor(u(rng) * 30) * 0.5};
    if (map.at(map.world_to_cell(start)) == CellState::Occupied) continue;
    const auto oracle = brute_force_cost(map, start, goal, pp);
    std::optional<double> got;
    try {
      got = plan_path(map, start, goal, pp).cost;
    } catch (const NoPath&) {
    }
    if (!oracle.has_value()) {
      CHECK_FALSE(got.has_value());
    } else if (got.has_value()) {
      CHECK(*got == doctest::Approx(*oracle).epsilon(1e-9));
      ++checked;
    } else {
      // plan_path refused a goal the oracle reached: only legal if the goal
      // cell itself is blocked by inflation (oracle shares that rule).
      CHECK(false);
    }
  }
  CHECK(checked >= 50);
}

TEST_CASE("every waypoint lies on an inflated-free cell") {
  OccupancyGrid map(20, 20, 0.5, {0, 0}, CellState::Free);
  for (int row = 5; row < 15; ++row) map.set({row, 10}, CellState::Occupied);
  PlannerParams pp;
  pp.inflation = 0.5;
  const PlannedPath p = plan_path(map, {1.25, 1.25}, {8.75, 8.75}, pp);
  const std::vector<bool> blocked = inflate_obstacles(map, pp.inflation);
  for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
    const CellIndex c = map.world_to_cell(p.waypoints[i]);
    CHECK_FALSE(blocked[static_cast<std::size_t>(c.row) * map.width() + c.col]);
  }
}
