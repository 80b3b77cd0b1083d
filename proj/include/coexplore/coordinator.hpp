#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include <json.hpp>

#include "coexplore/baselines.hpp"
#include "coexplore/frontier.hpp"
#include "coexplore/ledger.hpp"
#include "coexplore/reward.hpp"

namespace coex {

enum class ProtocolMode { Synchronous, Asynchronous };

struct UnknownAgent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoActiveGoal : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RoundIncomplete : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoordinatorParams {
  ProtocolMode mode = ProtocolMode::Asynchronous;
  StrategyKind strategy = StrategyKind::Ours;
  FilterParams filter;
  RewardWeights weights;
  PlannerParams planner;
  double eps_pt = 0.3;
  int goal_skip_wait = 3;
  int reexpose_ticks = 20;
  int sync_timeout_ticks = 50;
};

// Union of all submissions, duplicates within eps_pt collapsed to the
// first-seen representative. Submission order follows ascending agent id.
std::vector<FrontierPoint> merge_points(
    const std::map<int, std::vector<FrontierPoint>>& submissions,
    double eps_pt);

struct Assignment {
  int agent = 0;
  Vec2 goal;
};

struct FilterCycleStats {
  int raw_count = 0;
  int filtered_count = 0;
  double rad = 0.0;
  double per_unk = 0.0;
};

// Central goal-assignment server. All decision-path state is mutated under a
// single mutex, one request at a time; submissions land in per-agent slots
// with last-writer-wins semantics.
class Coordinator {
 public:
  using EventSink = std::function<void(const nlohmann::json&)>;

  explicit Coordinator(CoordinatorParams params, EventSink sink = nullptr);

  void register_agent(int id, const Transform2D& agent_to_merged);
  bool is_registered(int id) const;

  // Per-tick context from the harness: merged map, agent poses, pose graphs.
  void update_merged_map(const OccupancyGrid* merged);
  void update_agent_state(int id, const Pose2D& pose, const PoseGraph* graph);

  // Points arrive in the agent's frame and are transformed on receipt.
  void submit_frontiers(int id, const std::vector<FrontierPoint>& points,
                        int tick);
  bool has_submission(int id) const;

  // Stages a goal request for the next decision point.
  void request_goal(int id, int tick);
  bool has_pending_request(int id) const;
  int skip_counter(int id) const;

  // Serialized decision point for this tick. Asynchronous mode serves at most
  // one goal; synchronous mode runs a full round once every registered agent
  // is ready (or the barrier timeout expires).
  std::vector<Assignment> decide(int tick);

  // Explicit synchronous round; throws RoundIncomplete unless every
  // registered agent has a pending request, a submission, and no active goal.
  std::vector<Assignment> sync_round(int tick);

  void report_goal_status(int id, GoalStatus status, int tick);

  const GoalLedger& ledger() const { return ledger_; }
  const FilterParams& filter_params() const { return filter_; }
  const std::optional<FilterCycleStats>& last_cycle_stats() const {
    return last_cycle_;
  }

 private:
  struct AgentSlot {
    Transform2D to_merged;
    Pose2D pose;
    const PoseGraph* graph = nullptr;
    std::optional<std::vector<FrontierPoint>> submission;
    bool pending = false;
    int skip_counter = 0;
    int starved_since = -1;  // tick the counter reached goal_skip_wait
    int request_tick = 0;
  };

  void emit(const char* type, int tick, int agent, nlohmann::json payload);
  AgentSlot& slot(int id);
  const AgentSlot& slot(int id) const;

  // Candidate list for assignment: merged submissions, filtered per strategy.
  std::vector<FrontierPoint> build_candidates(int tick);
  RewardMatrix build_matrix_with_history(
      int agent, const std::vector<FrontierPoint>& cands, int tick);
  std::optional<Vec2> choose_for(int agent,
                                 const std::vector<FrontierPoint>& cands,
                                 std::vector<RewardMatrix>* round_matrices,
                                 int tick);
  std::vector<Assignment> run_sync_round(const std::vector<int>& ready,
                                         int tick);

  CoordinatorParams params_;
  EventSink sink_;
  mutable std::mutex mutex_;
  std::map<int, AgentSlot> agents_;
  GoalLedger ledger_;
  FilterParams filter_;  // adapted values persist across cycles
  const OccupancyGrid* merged_ = nullptr;
  std::optional<FilterCycleStats> last_cycle_;
  int sync_wait_since_ = -1;
};

}  // namespace coex
