#pragma once

#include <optional>
#include <vector>

#include "coexplore/frontier.hpp"
#include "coexplore/grid.hpp"
#include "coexplore/ledger.hpp"
#include "coexplore/planner.hpp"
#include "coexplore/pose_graph.hpp"

namespace coex {

struct RewardRow {
  double reward = 0.0;
  double x = 0.0;
  double y = 0.0;

  Vec2 position() const { return {x, y}; }
};

struct RewardMatrix {
  int agent = 0;
  std::vector<RewardRow> rows;

  double max_reward() const;
};

struct RewardWeights {
  double alpha = 1.0;   // information gain
  double beta = 0.5;    // pose-graph uncertainty weight
  double gamma = 0.1;   // path-length penalty per meter
};

// Minimum Euclidean distance used in the spread penalty k = K/d^2.
inline constexpr double kSpreadDistanceFloor = 0.25;

// reward = alpha * IG + beta * u - gamma * d_path, where IG is the unknown
// fraction around the frontier, u the normalized log spanning-tree weight,
// and d_path the planned path length. nullopt if the frontier is unreachable.
std::optional<double> compute_reward(const Pose2D& agent_pose,
                                     const FrontierPoint& frontier,
                                     const OccupancyGrid& merged,
                                     const PoseGraph& g,
                                     const FilterParams& fp,
                                     const RewardWeights& weights,
                                     const PlannerParams& pp);

// Builds an agent's matrix over the candidate list, dropping unreachable
// frontiers and near-duplicate positions (eps_pt).
RewardMatrix build_reward_matrix(int agent, const Pose2D& agent_pose,
                                 const std::vector<FrontierPoint>& candidates,
                                 const OccupancyGrid& merged,
                                 const PoseGraph& g, const FilterParams& fp,
                                 const RewardWeights& weights,
                                 const PlannerParams& pp, double eps_pt);

// Spread policy after one assignment: every other agent's rows lose
// K/d^2 with K = (that agent's max reward) / targets_assigned, d the
// distance to the assigned goal (floored). Rows matching the assigned goal
// are removed from all matrices, including the assignee's.
// targets_assigned is taken from the ledger.
void spread_update(std::vector<RewardMatrix>& matrices, Vec2 assigned_goal,
                   int assignee_agent, const GoalLedger& ledger);

// Argmax-reward row not blocked by the ledger; ties by (lower y, lower x).
// nullopt when every row is blocked or the matrix is empty.
std::optional<FrontierPoint> select_goal(const RewardMatrix& m,
                                         const GoalLedger& ledger, int tick);

}  // namespace coex
