#pragma once

#include <optional>

#include "coexplore/reward.hpp"

namespace coex {

enum class StrategyKind { Ours, Mags, FrontierGreedy };

// Greedy nearest-frontier baseline: minimal planned path length among
// frontiers not blocked by the ledger; ties by (lower y, lower x). No
// uncertainty term, no filtering, no spread.
std::optional<FrontierPoint> greedy_select(const Pose2D& agent_pose,
                                           const std::vector<FrontierPoint>& frontiers,
                                           const GoalLedger& ledger, int tick,
                                           const OccupancyGrid& merged,
                                           const PlannerParams& pp);

// Multi-agent reward baseline: argmax compute_reward over the unfiltered
// list, no spread update and no ledger dedupe (agents may duplicate targets).
std::optional<FrontierPoint> mags_select(const Pose2D& agent_pose,
                                         const std::vector<FrontierPoint>& frontiers,
                                         const OccupancyGrid& merged,
                                         const PoseGraph& g,
                                         const FilterParams& fp,
                                         const RewardWeights& weights,
                                         const PlannerParams& pp);

}  // namespace coex
