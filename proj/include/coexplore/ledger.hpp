#pragma once

#include <vector>

#include "coexplore/grid.hpp"

namespace coex {

enum class GoalStatus { Active, Reached, Abandoned };

struct GoalRecord {
  int agent = 0;
  Vec2 goal;
  int tick_assigned = 0;
  GoalStatus status = GoalStatus::Active;
  int tick_status = 0;  // tick of the last status change
};

// Coordinator's record of every goal ever assigned. Assignment records are
// never removed; targets_assigned_count is the all-time total.
class GoalLedger {
 public:
  explicit GoalLedger(double eps_pt = 0.3, int reexpose_ticks = 20)
      : eps_pt_(eps_pt), reexpose_ticks_(reexpose_ticks) {}

  double eps_pt() const { return eps_pt_; }
  int targets_assigned_count() const {
    return static_cast<int>(records_.size());
  }
  const std::vector<GoalRecord>& records() const { return records_; }
  int reexpose_ticks() const { return reexpose_ticks_; }

  void add(int agent, Vec2 goal, int tick);
  bool has_active_goal(int agent) const;
  // Marks the agent's active goal reached/abandoned. Returns false if the
  // agent has no active goal.
  bool set_status(int agent, GoalStatus status, int tick);

  // A position is blocked for selection if it matches (within eps_pt) an
  // active or reached goal, or an abandoned goal within the re-expose window.
  bool blocks(Vec2 p, int tick) const;

 private:
  double eps_pt_;
  int reexpose_ticks_;
  std::vector<GoalRecord> records_;
};

}  // namespace coex
