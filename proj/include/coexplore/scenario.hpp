#pragma once

#include <map>
#include <string>
#include <vector>

#include "coexplore/agent.hpp"
#include "coexplore/coordinator.hpp"

namespace coex {

struct ScenarioInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string map_pgm;
  std::string map_meta;
  ProtocolMode mode = ProtocolMode::Asynchronous;
  StrategyKind strategy = StrategyKind::Ours;
  int tick_limit = 400;
  unsigned seed = 1;
  double stop_coverage = 100.0;

  FilterParams filter;
  RewardWeights weights;
  PlannerParams planner;
  double eps_pt = 0.3;
  int goal_skip_wait = 3;
  int reexpose_ticks = 20;
  int sync_timeout_ticks = 50;
  // Decision cost model: a goal assignment is delivered after
  // (candidate evaluations / evals_per_tick) ticks of coordinator latency,
  // so scoring fewer candidates buys faster turnaround.
  int evals_per_tick = 10;

  SensorParams sensor;
  double speed = 0.5;
  double goal_tol = 0.5;
  int replan_limit = 3;
  double loop_closure_radius = 1.0;
  double loop_closure_weight = 5.0;
  double spawn_jitter = 0.0;

  std::vector<Pose2D> spawns;

  CoordinatorParams coordinator_params() const;
  AgentParams agent_params(int id) const;
};

// Plain-text config: "[section]" headers and "key = value" lines; '#'
// comments. Section [agent.N] holds "spawn = x y theta".
Scenario load_scenario(const std::string& path);

ProtocolMode parse_mode(const std::string& s);
StrategyKind parse_strategy(const std::string& s);
std::string strategy_name(StrategyKind k);

}  // namespace coex
