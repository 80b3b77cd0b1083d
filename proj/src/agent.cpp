#include "coexplore/agent.hpp"

#include <algorithm>
#include <cmath>

namespace coex {

Agent::Agent(const AgentParams& params, const OccupancyGrid& truth)
    : params_(params), pose_(params.spawn),
      local_map_(truth.width(), truth.height(), truth.resolution(),
                 truth.origin()),
      graph_(params.spawn) {
  pose_.theta = normalize_angle(pose_.theta);
  last_graph_pos_ = pose_.position();
}

void Agent::sense(const OccupancyGrid& truth) {
  integrate_scan(local_map_, raycast_scan(truth, pose_, params_.sensor));
}

void Agent::extend_pose_graph() {
  const double step = distance(pose_.position(), last_graph_pos_);
  if (step < 1e-9) return;
  graph_.add_odometry_node(pose_, 1.0 / (step + 1e-3));
  graph_.try_loop_closure(params_.loop_closure_radius,
                          params_.loop_closure_weight);
  last_graph_pos_ = pose_.position();
}

bool Agent::path_still_valid() const {
  if (path_.empty()) return false;
  const std::vector<bool> blocked =
      inflate_obstacles(local_map_, params_.planner.inflation);
  for (const Vec2& wp : path_) {
    const CellIndex c = local_map_.world_to_cell(wp);
    if (!local_map_.in_bounds(c)) return false;
    if (local_map_.at(c) == CellState::Occupied) return false;
    if (blocked[static_cast<std::size_t>(c.row) * local_map_.width() + c.col])
      return false;
  }
  return true;
}

bool Agent::replan() {
  try {
    PlannedPath p = plan_path(local_map_, pose_.position(), *goal_,
                              params_.planner);
    path_ = std::move(p.waypoints);
    if (!path_.empty()) path_.erase(path_.begin());  // drop the start cell
    replan_failures_ = 0;
    return true;
  } catch (const NoPath&) {
  } catch (const StartInObstacle&) {
  }
  ++replan_failures_;
  path_.clear();
  return false;
}

void Agent::reset_goal() {
  goal_.reset();
  path_.clear();
  replan_failures_ = 0;
  status_ = AgentStatus::Idle;
}

void Agent::navigate(const OccupancyGrid& truth, Coordinator& coord,
                     int tick_no) {
  if (distance(pose_.position(), *goal_) <= params_.goal_tol) {
    coord.report_goal_status(params_.id, GoalStatus::Reached, tick_no);
    reset_goal();
    return;
  }

  if (status_ == AgentStatus::Blocked || !path_still_valid()) {
    if (!replan()) {
      if (replan_failures_ >= params_.replan_limit) {
        coord.report_goal_status(params_.id, GoalStatus::Abandoned, tick_no);
        reset_goal();
      } else {
        status_ = AgentStatus::Blocked;
      }
      return;
    }
    status_ = AgentStatus::Navigating;
  }

  // Advance along the polyline, validating each substep against the ground
  // truth (unknown cells on the path may turn out to be walls).
  double budget = params_.speed;
  const double substep = truth.resolution() * 0.25;
  while (budget > 1e-9 && !path_.empty()) {
    const Vec2 target = path_.front();
    const double seg = distance(pose_.position(), target);
    if (seg < 1e-9) {
      path_.erase(path_.begin());
      continue;
    }
    const double advance = std::min({budget, seg, substep});
    const Vec2 next{pose_.x + (target.x - pose_.x) / seg * advance,
                    pose_.y + (target.y - pose_.y) / seg * advance};
    const CellIndex c = truth.world_to_cell(next);
    if (!truth.in_bounds(c) || truth.at(c) == CellState::Occupied) {
      // Physically blocked: the planned cell was Unknown but is a wall.
      // Record the bump so the next replan routes around it; without this
      // an occluded wall cell can livelock the plan/bump cycle forever.
      if (truth.in_bounds(c))
        integrate_scan(local_map_, {{c, CellState::Occupied}});
      path_.clear();
      status_ = AgentStatus::Blocked;
      return;
    }
    pose_.theta = normalize_angle(std::atan2(target.y - pose_.y,
                                             target.x - pose_.x));
    pose_.x = next.x;
    pose_.y = next.y;
    budget -= advance;
  }

  if (path_.empty()) {
    if (distance(pose_.position(), *goal_) <= params_.goal_tol) {
      coord.report_goal_status(params_.id, GoalStatus::Reached, tick_no);
      reset_goal();
    } else {
      // Ran out of waypoints short of the goal; force a replan next tick.
      status_ = AgentStatus::Blocked;
    }
  }
}

void Agent::tick(const OccupancyGrid& truth, Coordinator& coord,
                 int tick_no) {
  sense(truth);
  extend_pose_graph();

  switch (status_) {
    case AgentStatus::Navigating:
    case AgentStatus::Blocked:
      navigate(truth, coord, tick_no);
      break;
    case AgentStatus::Idle: {
      const Transform2D merged_to_agent = params_.to_merged.inverse();
      std::vector<FrontierPoint> frontiers =
          detect_frontiers(local_map_, params_.id);
      // Submissions travel in the agent frame; the coordinator transforms.
      for (FrontierPoint& f : frontiers)
        f.position = transform_point(merged_to_agent, f.position);
      coord.submit_frontiers(params_.id, frontiers, tick_no);
      coord.request_goal(params_.id, tick_no);
      status_ = AgentStatus::AwaitingGoal;
      break;
    }
    case AgentStatus::AwaitingGoal:
      // Keep submissions fresh while waiting (sync rounds and async losers
      // are served from the latest list).
      if (!coord.has_pending_request(params_.id) &&
          !coord.ledger().has_active_goal(params_.id)) {
        status_ = AgentStatus::Idle;  // served with no_candidates; retry
      } else {
        const Transform2D merged_to_agent = params_.to_merged.inverse();
        std::vector<FrontierPoint> frontiers =
            detect_frontiers(local_map_, params_.id);
        for (FrontierPoint& f : frontiers)
          f.position = transform_point(merged_to_agent, f.position);
        coord.submit_frontiers(params_.id, frontiers, tick_no);
      }
      break;
  }
}

void Agent::receive_goal(Vec2 goal_merged) {
  goal_ = transform_point(params_.to_merged.inverse(), goal_merged);
  status_ = AgentStatus::Blocked;  // navigate() plans on the next tick
  replan_failures_ = 0;
}

}  // namespace coex
