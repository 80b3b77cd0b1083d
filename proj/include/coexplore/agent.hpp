#pragma once

#include <optional>

#include "coexplore/coordinator.hpp"
#include "coexplore/frontier.hpp"
#include "coexplore/grid.hpp"
#include "coexplore/planner.hpp"
#include "coexplore/pose_graph.hpp"

namespace coex {

enum class AgentStatus { Idle, AwaitingGoal, Navigating, Blocked };

struct AgentParams {
  int id = 0;
  Pose2D spawn;
  SensorParams sensor;
  double speed = 0.5;               // meters per tick
  PlannerParams planner;
  double goal_tol = 0.5;            // meters
  int replan_limit = 3;             // failed replans before abandoning
  double loop_closure_radius = 1.0; // meters
  double loop_closure_weight = 5.0;
  Transform2D to_merged;            // agent frame -> merged frame
};

// One robot: local map, pose graph, navigation state. Owned by its own loop;
// talks to the rest of the system only through the coordinator.
class Agent {
 public:
  Agent(const AgentParams& params, const OccupancyGrid& truth);

  int id() const { return params_.id; }
  const Pose2D& pose() const { return pose_; }
  AgentStatus status() const { return status_; }
  const OccupancyGrid& local_map() const { return local_map_; }
  const PoseGraph& pose_graph() const { return graph_; }
  std::optional<Vec2> active_goal() const { return goal_; }
  const std::vector<Vec2>& path() const { return path_; }

  // One simulation step: sense, extend the pose graph, then navigate or
  // (when idle) submit frontiers and request a goal.
  void tick(const OccupancyGrid& truth, Coordinator& coord, int tick_no);

  // Assignment delivery from the coordinator (goal in merged frame).
  void receive_goal(Vec2 goal_merged);

 private:
  void sense(const OccupancyGrid& truth);
  void extend_pose_graph();
  void navigate(const OccupancyGrid& truth, Coordinator& coord, int tick_no);
  bool path_still_valid() const;
  bool replan();
  void reset_goal();

  AgentParams params_;
  Pose2D pose_;
  OccupancyGrid local_map_;
  PoseGraph graph_;
  AgentStatus status_ = AgentStatus::Idle;
  std::optional<Vec2> goal_;        // world frame
  std::vector<Vec2> path_;          // remaining waypoints, world frame
  int replan_failures_ = 0;
  Vec2 last_graph_pos_;
};

}  // namespace coex
