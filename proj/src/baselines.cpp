#include "coexplore/baselines.hpp"

namespace coex {

std::optional<FrontierPoint> greedy_select(const Pose2D& agent_pose,
                                           const std::vector<FrontierPoint>& frontiers,
                                           const GoalLedger& ledger, int tick,
                                           const OccupancyGrid& merged,
                                           const PlannerParams& pp) {
  const FrontierPoint* best = nullptr;
  double best_len = 0.0;
  for (const FrontierPoint& f : frontiers) {
    if (ledger.blocks(f.position, tick)) continue;
    const std::optional<double> len =
        plan_path_cost(merged, agent_pose.position(), f.position, pp);
    if (!len) continue;
    if (!best || *len < best_len ||
        (*len == best_len && (f.position.y < best->position.y ||
                              (f.position.y == best->position.y &&
                               f.position.x < best->position.x)))) {
      best = &f;
      best_len = *len;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

std::optional<FrontierPoint> mags_select(const Pose2D& agent_pose,
                                         const std::vector<FrontierPoint>& frontiers,
                                         const OccupancyGrid& merged,
                                         const PoseGraph& g,
                                         const FilterParams& fp,
                                         const RewardWeights& weights,
                                         const PlannerParams& pp) {
  const FrontierPoint* best = nullptr;
  double best_r = 0.0;
  for (const FrontierPoint& f : frontiers) {
    const std::optional<double> r =
        compute_reward(agent_pose, f, merged, g, fp, weights, pp);
    if (!r) continue;
    if (!best || *r > best_r ||
        (*r == best_r && (f.position.y < best->position.y ||
                          (f.position.y == best->position.y &&
                           f.position.x < best->position.x)))) {
      best = &f;
      best_r = *r;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

}  // namespace coex
