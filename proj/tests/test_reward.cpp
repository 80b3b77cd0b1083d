#include <doctest.h>

#include <cmath>

#include "coexplore/ledger.hpp"
#include "coexplore/reward.hpp"

using namespace coex;

namespace {

RewardMatrix make_matrix(int agent,
                         std::initializer_list<RewardRow> rows) {
  RewardMatrix m;
  m.agent = agent;
  m.rows = rows;
  return m;
}

}  // namespace

TEST_CASE("compute_reward combines the three terms linearly") {
  // Free 10 m x 10 m map at 0.5 m, one unknown cell in the frontier's
  // sampling disc, a unit-weight triangle pose graph.
  OccupancyGrid map(20, 20, 0.5, {0, 0}, CellState::Free);
  map.set({0, 11}, CellState::Unknown);
  const PoseGraph g = PoseGraph::from_edges(
      3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  Pose2D pose{0.75, 0.75, 0.0};
  FrontierPoint f{{5.75, 0.75}, 0};
  FilterParams fp;
  fp.rad = 0.5;  // disc of 5 cells; exactly one is Unknown
  RewardWeights w;
  PlannerParams pp;
  pp.inflation = 0.0;

  // d_path = 5.0 (straight corridor), ig = 1/5, u = log(3)/2.
  const auto r = compute_reward(pose, f, map, g, fp, w, pp);
  REQUIRE(r.has_value());
  const double expected = 1.0 * 0.2 + 0.5 * std::log(3.0) / 2.0 - 0.1 * 5.0;
  CHECK(*r == doctest::Approx(expected).epsilon(1e-9));

  // A trivial single-node graph contributes u = 0.
  const PoseGraph g1(Pose2D{0, 0, 0});
  const auto r1 = compute_reward(pose, f, map, g1, fp, w, pp);
  REQUIRE(r1.has_value());
  CHECK(*r1 == doctest::Approx(0.2 - 0.5).epsilon(1e-9));
}

TEST_CASE("unreachable frontiers yield no reward") {
  OccupancyGrid map(10, 10, 0.5, {0, 0}, CellState::Free);
  for (int row = 0; row < 10; ++row) map.set({row, 5}, CellState::Occupied);
  const PoseGraph g(Pose2D{0.25, 0.25, 0});
  PlannerParams pp;
  pp.inflation = 0.0;
  const auto r = compute_reward(Pose2D{0.75, 0.75, 0}, FrontierPoint{{4.25, 0.75}, 0},
                                map, g, FilterParams{}, RewardWeights{}, pp);
  CHECK_FALSE(r.has_value());
}

TEST_CASE("build_reward_matrix drops unreachable and duplicate candidates") {
  OccupancyGrid map(20, 20, 0.5, {0, 0}, CellState::Free);
  for (int row = 0; row < 20; ++row) map.set({row, 15}, CellState::Occupied);
  const PoseGraph g(Pose2D{0.75, 0.75, 0});
  PlannerParams pp;
  pp.inflation = 0.0;
  const std::vector<FrontierPoint> cands = {
      {{2.25, 2.25}, 0},
      {{2.35, 2.35}, 1},  // within eps_pt of the first: dropped
      {{9.25, 2.25}, 0},  // behind the wall: unreachable
      {{4.25, 4.25}, 2},
  };
  const RewardMatrix m =
      build_reward_matrix(0, Pose2D{0.75, 0.75, 0}, cands, map, g, FilterParams{},
                          RewardWeights{}, pp, 0.3);
  REQUIRE(m.rows.size() == 2);
  CHECK(m.rows[0].x == doctest::Approx(2.25));
  CHECK(m.rows[1].x == doctest::Approx(4.25));
}

TEST_CASE("spread penalty is the agent's max reward over squared distance") {
  GoalLedger ledger;
  ledger.add(0, {0, 0}, 0);  // first target ever: K divides by 1
  auto a0 = make_matrix(0, {{10.0, 0, 0}});
  auto a1 = make_matrix(1, {{7.0, 2, 0}});
  std::vector<RewardMatrix> mats{a0, a1};
  spread_update(mats, {0, 0}, 0, ledger);
  // The assigned point is removed from every matrix, including the assignee's.
  CHECK(mats[0].rows.empty());
  // K = 7 / 1, d = 2: penalty 7/4.
  REQUIRE(mats[1].rows.size() == 1);
  CHECK(mats[1].rows[0].reward == doctest::Approx(7.0 - 1.75));
}

TEST_CASE("penalty falls off with inverse square distance") {
  GoalLedger ledger;
  ledger.add(0, {0, 0}, 0);
  auto a1 = make_matrix(1, {{5.0, 1, 0}, {5.0, 3, 0}});
  std::vector<RewardMatrix> mats{make_matrix(0, {{6.0, 0, 0}}), a1};
  spread_update(mats, {0, 0}, 0, ledger);
  const double near_pen = 5.0 - mats[1].rows[0].reward;
  const double far_pen = 5.0 - mats[1].rows[1].reward;
  CHECK(near_pen == doctest::Approx(5.0));       // K = 5, d = 1
  CHECK(far_pen == doctest::Approx(5.0 / 9.0));  // d = 3
  CHECK(near_pen / far_pen == doctest::Approx(9.0));
}

TEST_CASE("penalty shrinks as more targets are assigned") {
  GoalLedger ledger;
  ledger.add(2, {50, 50}, 0);
  ledger.add(1, {60, 60}, 0);
  ledger.add(0, {0, 0}, 1);  // third assignment overall
  std::vector<RewardMatrix> mats{make_matrix(0, {{9.0, 0, 0}}),
                                 make_matrix(1, {{4.0, 2, 0}})};
  spread_update(mats, {0, 0}, 0, ledger);
  // K = 4 / 3, d = 2: penalty 1/3.
  CHECK(mats[1].rows[0].reward == doctest::Approx(4.0 - 1.0 / 3.0));
}

TEST_CASE("distance floor bounds the penalty near the assigned goal") {
  GoalLedger ledger(0.1, 20);  // tight eps_pt so the close row survives
  ledger.add(0, {0, 0}, 0);
  std::vector<RewardMatrix> mats{make_matrix(0, {{8.0, 0, 0}}),
                                 make_matrix(1, {{5.0, 0.15, 0}})};
  spread_update(mats, {0, 0}, 0, ledger);
  // d = 0.15 clamps to 0.25: penalty 5 / 0.0625 = 80, not unbounded.
  CHECK(mats[1].rows[0].reward == doctest::Approx(5.0 - 80.0));
}

TEST_CASE("spread never penalizes the assignee's remaining rows") {
  GoalLedger ledger;
  ledger.add(0, {0, 0}, 0);
  std::vector<RewardMatrix> mats{make_matrix(0, {{10.0, 0, 0}, {6.0, 1, 0}})};
  spread_update(mats, {0, 0}, 0, ledger);
  REQUIRE(mats[0].rows.size() == 1);
  CHECK(mats[0].rows[0].reward == doctest::Approx(6.0));
}

TEST_CASE("equidistant rows keep their relative order after spread") {
  GoalLedger ledger;
  ledger.add(0, {0, 0}, 0);
  std::vector<RewardMatrix> mats{
      make_matrix(0, {{9.0, 0, 0}}),
      make_matrix(1, {{5.0, 2, 0}, {4.0, 0, 2}, {3.0, -2, 0}})};
  spread_update(mats, {0, 0}, 0, ledger);
  const auto& rows = mats[1].rows;
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].reward > rows[1].reward);
  CHECK(rows[1].reward > rows[2].reward);
  // All three sit 2 m from the goal, so the penalty is identical.
  CHECK(rows[0].reward - rows[1].reward == doctest::Approx(1.0));
}

TEST_CASE("select_goal takes the highest reward and respects the ledger") {
  GoalLedger ledger(0.3, 20);
  const auto m = make_matrix(
      0, {{2.0, 1, 1}, {7.0, 5, 5}, {4.0, 3, 3}});
  auto best = select_goal(m, ledger, 0);
  REQUIRE(best.has_value());
  CHECK(best->position.x == doctest::Approx(5.0));
  CHECK(best->source_agent == 0);

  ledger.add(1, {5.1, 5.1}, 0);  // within eps_pt of (5, 5)
  best = select_goal(m, ledger, 0);
  REQUIRE(best.has_value());
  CHECK(best->position.x == doctest::Approx(3.0));
}

TEST_CASE("select_goal breaks reward ties by lower y then lower x") {
  GoalLedger ledger;
  const auto m = make_matrix(
      0, {{5.0, 4, 2}, {5.0, 3, 1}, {5.0, 1, 2}});
  const auto pick = select_goal(m, ledger, 0);
  REQUIRE(pick.has_value());
  CHECK(pick->position.y == doctest::Approx(1.0));
  CHECK(pick->position.x == doctest::Approx(3.0));

  const auto m2 = make_matrix(0, {{5.0, 4, 2}, {5.0, 1, 2}});
  const auto pick2 = select_goal(m2, ledger, 0);
  REQUIRE(pick2.has_value());
  CHECK(pick2->position.x == doctest::Approx(1.0));
}

TEST_CASE("select_goal returns nothing when every row is blocked or absent") {
  GoalLedger ledger(0.3, 20);
  CHECK_FALSE(select_goal(make_matrix(0, {}), ledger, 0).has_value());
  ledger.add(1, {2, 2}, 0);
  const auto m = make_matrix(0, {{1.0, 2, 2}});
  CHECK_FALSE(select_goal(m, ledger, 0).has_value());
}

TEST_CASE("abandoned goals re-expose after the window; reached never do") {
  GoalLedger ledger(0.3, 10);
  ledger.add(0, {2, 2}, 0);
  CHECK(ledger.has_active_goal(0));
  CHECK(ledger.set_status(0, GoalStatus::Abandoned, 5));
  CHECK_FALSE(ledger.has_active_goal(0));
  CHECK(ledger.blocks({2, 2}, 14));
  CHECK_FALSE(ledger.blocks({2, 2}, 16));

  ledger.add(1, {4, 4}, 6);
  CHECK(ledger.set_status(1, GoalStatus::Reached, 8));
  CHECK(ledger.blocks({4, 4}, 1000));

  // No active goal to update.
  CHECK_FALSE(ledger.set_status(0, GoalStatus::Reached, 9));
  CHECK(ledger.targets_assigned_count() == 2);
}
