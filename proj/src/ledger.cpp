#include "coexplore/ledger.hpp"

namespace coex {

void GoalLedger::add(int agent, Vec2 goal, int tick) {
  if (has_active_goal(agent))
    throw std::logic_error("GoalLedger: agent already has an active goal");
  records_.push_back({agent, goal, tick, GoalStatus::Active, tick});
}

bool GoalLedger::has_active_goal(int agent) const {
  for (const GoalRecord& r : records_)
    if (r.agent == agent && r.status == GoalStatus::Active) return true;
  return false;
}

bool GoalLedger::set_status(int agent, GoalStatus status, int tick) {
  for (GoalRecord& r : records_) {
    if (r.agent == agent && r.status == GoalStatus::Active) {
      r.status = status;
      r.tick_status = tick;
      return true;
    }
  }
  return false;
}

bool GoalLedger::blocks(Vec2 p, int tick) const {
  for (const GoalRecord& r : records_) {
    if (distance(r.goal, p) > eps_pt_) continue;
    if (r.status == GoalStatus::Abandoned) {
      if (tick - r.tick_status < reexpose_ticks_) return true;
    } else {
      return true;
    }
  }
  return false;
}

}  // namespace coex
