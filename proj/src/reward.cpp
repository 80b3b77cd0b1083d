#include "coexplore/reward.hpp"

#include <algorithm>
#include <cmath>

namespace coex {

double RewardMatrix::max_reward() const {
  double best = -std::numeric_limits<double>::infinity();
  for (const RewardRow& r : rows) best = std::max(best, r.reward);
  return best;
}

std::optional<double> compute_reward(const Pose2D& agent_pose,
                                     const FrontierPoint& frontier,
                                     const OccupancyGrid& merged,
                                     const PoseGraph& g,
                                     const FilterParams& fp,
                                     const RewardWeights& weights,
                                     const PlannerParams& pp) {
  const std::optional<double> d_path =
      plan_path_cost(merged, agent_pose.position(), frontier.position, pp);
  if (!d_path) return std::nullopt;

  double ig = 0.0;
  if (merged.contains(frontier.position))
    ig = unknown_percentage(merged, frontier.position, fp.rad) / 100.0;

  double u = 0.0;
  if (g.node_count() >= 2)
    u = log_spanning_tree_weight(g) / (g.node_count() - 1);

  return weights.alpha * ig + weights.beta * u - weights.gamma * *d_path;
}

RewardMatrix build_reward_matrix(int agent, const Pose2D& agent_pose,
                                 const std::vector<FrontierPoint>& candidates,
                                 const OccupancyGrid& merged,
                                 const PoseGraph& g, const FilterParams& fp,
                                 const RewardWeights& weights,
                                 const PlannerParams& pp, double eps_pt) {
  RewardMatrix m;
  m.agent = agent;
  for (const FrontierPoint& f : candidates) {
    const bool dup = std::any_of(
        m.rows.begin(), m.rows.end(), [&](const RewardRow& r) {
          return distance(r.position(), f.position) <= eps_pt;
        });
    if (dup) continue;
    const std::optional<double> r =
        compute_reward(agent_pose, f, merged, g, fp, weights, pp);
    if (!r) continue;  // unreachable
    m.rows.push_back({*r, f.position.x, f.position.y});
  }
  return m;
}

void spread_update(std::vector<RewardMatrix>& matrices, Vec2 assigned_goal,
                   int assignee_agent, const GoalLedger& ledger) {
  const int targets = std::max(1, ledger.targets_assigned_count());
  const double eps_pt = ledger.eps_pt();
  for (RewardMatrix& m : matrices) {
    // Remove rows matching the assigned goal from every matrix.
    std::erase_if(m.rows, [&](const RewardRow& r) {
      return distance(r.position(), assigned_goal) <= eps_pt;
    });
    if (m.agent == assignee_agent || m.rows.empty()) continue;
    const double big_k = m.max_reward() / targets;
    for (RewardRow& r : m.rows) {
      const double d =
          std::max(kSpreadDistanceFloor, distance(r.position(), assigned_goal));
      r.reward -= big_k / (d * d);
    }
  }
}

std::optional<FrontierPoint> select_goal(const RewardMatrix& m,
                                         const GoalLedger& ledger, int tick) {
  const RewardRow* best = nullptr;
  for (const RewardRow& r : m.rows) {
    if (ledger.blocks(r.position(), tick)) continue;
    if (!best || r.reward > best->reward ||
        (r.reward == best->reward &&
         (r.y < best->y || (r.y == best->y && r.x < best->x)))) {
      best = &r;
    }
  }
  if (!best) return std::nullopt;
  return FrontierPoint{best->position(), m.agent};
}

}  // namespace coex
