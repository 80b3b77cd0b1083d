#include "coexplore/coordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coex {

std::vector<FrontierPoint> merge_points(
    const std::map<int, std::vector<FrontierPoint>>& submissions,
    double eps_pt) {
  std::vector<FrontierPoint> merged;
  for (const auto& [agent, points] : submissions) {
    for (const FrontierPoint& p : points) {
      const bool dup = std::any_of(
          merged.begin(), merged.end(), [&](const FrontierPoint& q) {
            return distance(p.position, q.position) <= eps_pt;
          });
      if (!dup) merged.push_back(p);
    }
  }
  return merged;
}

Coordinator::Coordinator(CoordinatorParams params, EventSink sink)
    : params_(params), sink_(std::move(sink)),
      ledger_(params.eps_pt, params.reexpose_ticks), filter_(params.filter) {}

void Coordinator::emit(const char* type, int tick, int agent,
                       nlohmann::json payload) {
  if (!sink_) return;
  nlohmann::json ev{{"tick", tick}, {"agent", agent}, {"event", type}};
  ev["payload"] = std::move(payload);
  sink_(ev);
}

Coordinator::AgentSlot& Coordinator::slot(int id) {
  auto it = agents_.find(id);
  if (it == agents_.end()) throw UnknownAgent("unknown agent id");
  return it->second;
}

const Coordinator::AgentSlot& Coordinator::slot(int id) const {
  auto it = agents_.find(id);
  if (it == agents_.end()) throw UnknownAgent("unknown agent id");
  return it->second;
}

void Coordinator::register_agent(int id, const Transform2D& agent_to_merged) {
  std::lock_guard lock(mutex_);
  AgentSlot s;
  s.to_merged = agent_to_merged;
  agents_[id] = s;
  emit("register", 0, id, {});
}

bool Coordinator::is_registered(int id) const {
  std::lock_guard lock(mutex_);
  return agents_.count(id) > 0;
}

void Coordinator::update_merged_map(const OccupancyGrid* merged) {
  std::lock_guard lock(mutex_);
  merged_ = merged;
}

void Coordinator::update_agent_state(int id, const Pose2D& pose,
                                     const PoseGraph* graph) {
  std::lock_guard lock(mutex_);
  AgentSlot& s = slot(id);
  s.pose = pose;
  s.graph = graph;
}

void Coordinator::submit_frontiers(int id,
                                   const std::vector<FrontierPoint>& points,
                                   int tick) {
  std::lock_guard lock(mutex_);
  AgentSlot& s = slot(id);
  std::vector<FrontierPoint> in_merged;
  in_merged.reserve(points.size());
  for (const FrontierPoint& p : points)
    in_merged.push_back({transform_point(s.to_merged, p.position), id});
  s.submission = std::move(in_merged);
  emit("submit_frontiers", tick, id,
       {{"count", s.submission->size()}});
}

bool Coordinator::has_submission(int id) const {
  std::lock_guard lock(mutex_);
  return slot(id).submission.has_value();
}

void Coordinator::request_goal(int id, int tick) {
  std::lock_guard lock(mutex_);
  AgentSlot& s = slot(id);
  if (!s.pending) {
    s.pending = true;
    s.request_tick = tick;
    emit("request_goal", tick, id, {});
  }
}

bool Coordinator::has_pending_request(int id) const {
  std::lock_guard lock(mutex_);
  return slot(id).pending;
}

int Coordinator::skip_counter(int id) const {
  std::lock_guard lock(mutex_);
  return slot(id).skip_counter;
}

std::vector<FrontierPoint> Coordinator::build_candidates(int tick) {
  std::map<int, std::vector<FrontierPoint>> submissions;
  for (const auto& [id, s] : agents_)
    if (s.submission) submissions[id] = *s.submission;
  std::vector<FrontierPoint> merged = merge_points(submissions, params_.eps_pt);

  FilterCycleStats stats;
  stats.raw_count = static_cast<int>(merged.size());

  // Positions the ledger still blocks (active/reached, or abandoned inside
  // the re-expose window) are not exploration candidates. Dropping them
  // before filtering keeps the adaptive min_pts trigger honest: otherwise a
  // handful of stale points can satisfy the count while nothing is
  // assignable and exploration deadlocks.
  std::erase_if(merged, [&](const FrontierPoint& p) {
    return ledger_.blocks(p.position, tick);
  });

  if (params_.strategy == StrategyKind::Ours && merged_) {
    // Points inside the planner's inflation band can never be planned to.
    // These are typically doorway frontiers whose cluster representative
    // hugs a wall: snap them to the nearest plannable Free cell nearby
    // instead of losing the whole cluster, and drop them only if no such
    // cell exists; unassignable points must not count toward min_pts.
    const std::vector<bool> blocked =
        inflate_obstacles(*merged_, params_.planner.inflation);
    const auto is_blocked = [&](CellIndex c) {
      return blocked[static_cast<std::size_t>(c.row) * merged_->width() +
                     c.col];
    };
    std::erase_if(merged, [&](FrontierPoint& p) {
      const CellIndex c = merged_->world_to_cell(p.position);
      if (!merged_->in_bounds(c)) return true;
      if (!is_blocked(c)) return false;
      constexpr int kSnapSpan = 3;
      double best_d = std::numeric_limits<double>::infinity();
      CellIndex best{0, 0};
      for (int dr = -kSnapSpan; dr <= kSnapSpan; ++dr) {
        for (int dc = -kSnapSpan; dc <= kSnapSpan; ++dc) {
          const CellIndex nb{c.row + dr, c.col + dc};
          if (!merged_->in_bounds(nb) ||
              merged_->at(nb) != CellState::Free || is_blocked(nb))
            continue;
          const double d =
              distance(merged_->cell_center(nb), p.position);
          if (d < best_d - 1e-12) {
            best_d = d;
            best = nb;
          }
        }
      }
      if (!std::isfinite(best_d)) return true;
      p.position = merged_->cell_center(best);
      return ledger_.blocks(p.position, tick);
    });
  }

  if (params_.strategy == StrategyKind::Ours && merged_) {
    AdaptiveFilterResult res = adaptive_filter(merged, *merged_, filter_);
    filter_ = res.params;  // adapted params persist to the next cycle
    // In a mostly-unknown map, widening the radius never sheds candidates
    // below max_pts and rad would ratchet without bound, degrading the
    // percentage test into a global average. Bound it to a small multiple
    // of the configured radius.
    filter_.rad = std::min(filter_.rad, 3.0 * params_.filter.rad);
    merged = std::move(res.points);
  }
  stats.filtered_count = static_cast<int>(merged.size());
  stats.rad = filter_.rad;
  stats.per_unk = filter_.per_unk;
  last_cycle_ = stats;
  emit("filter_cycle", tick, -1,
       {{"raw", stats.raw_count},
        {"filtered", stats.filtered_count},
        {"rad", stats.rad},
        {"per_unk", stats.per_unk}});
  return merged;
}

RewardMatrix Coordinator::build_matrix_with_history(
    int agent, const std::vector<FrontierPoint>& cands, int tick) {
  const AgentSlot& s = slot(agent);
  static const PoseGraph kEmptyGraph;
  const PoseGraph& graph = s.graph ? *s.graph : kEmptyGraph;
  RewardMatrix m =
      build_reward_matrix(agent, s.pose, cands, *merged_, graph, filter_,
                          params_.weights, params_.planner, params_.eps_pt);
  // Replay the spread penalty of every goal already in the ledger, with the
  // targets-assigned count each goal had at its own assignment time.
  int targets = 0;
  for (const GoalRecord& rec : ledger_.records()) {
    ++targets;
    // A goal abandoned long enough ago is re-exposed: it neither consumes
    // its frontier nor spreads a penalty anymore.
    if (rec.status == GoalStatus::Abandoned &&
        tick - rec.tick_status >= ledger_.reexpose_ticks())
      continue;
    std::erase_if(m.rows, [&](const RewardRow& r) {
      return distance(r.position(), rec.goal) <= params_.eps_pt;
    });
    if (rec.agent == agent || m.rows.empty()) continue;
    const double big_k = m.max_reward() / targets;
    for (RewardRow& r : m.rows) {
      const double d =
          std::max(kSpreadDistanceFloor, distance(r.position(), rec.goal));
      r.reward -= big_k / (d * d);
    }
  }
  return m;
}

std::optional<Vec2> Coordinator::choose_for(
    int agent, const std::vector<FrontierPoint>& cands,
    std::vector<RewardMatrix>* round_matrices, int tick) {
  const AgentSlot& s = slot(agent);
  static const PoseGraph kEmptyGraph;
  const PoseGraph& graph = s.graph ? *s.graph : kEmptyGraph;

  switch (params_.strategy) {
    case StrategyKind::FrontierGreedy: {
      const auto pick = greedy_select(s.pose, cands, ledger_, tick, *merged_,
                                      params_.planner);
      if (!pick) return std::nullopt;
      return pick->position;
    }
    case StrategyKind::Mags: {
      const auto pick = mags_select(s.pose, cands, *merged_, graph, filter_,
                                    params_.weights, params_.planner);
      if (!pick) return std::nullopt;
      return pick->position;
    }
    case StrategyKind::Ours:
      break;
  }

  RewardMatrix* m = nullptr;
  RewardMatrix local;
  if (round_matrices) {
    for (RewardMatrix& rm : *round_matrices)
      if (rm.agent == agent) m = &rm;
  }
  if (!m) {
    local = build_matrix_with_history(agent, cands, tick);
    m = &local;
  }
  const double pre_max = m->rows.empty() ? 0.0 : m->max_reward();
  const auto pick = select_goal(*m, ledger_, tick);
  if (!pick) return std::nullopt;
  emit("assignment_detail", tick, agent,
       {{"x", pick->position.x},
        {"y", pick->position.y},
        {"pre_max_reward", pre_max},
        {"targets_assigned", ledger_.targets_assigned_count() + 1}});
  return pick->position;
}

std::vector<Assignment> Coordinator::run_sync_round(
    const std::vector<int>& ready, int tick) {
  const std::vector<FrontierPoint> cands = build_candidates(tick);
  std::vector<Assignment> out;

  std::vector<RewardMatrix> matrices;
  if (params_.strategy == StrategyKind::Ours)
    for (int id : ready) matrices.push_back(build_matrix_with_history(id, cands, tick));

  for (int id : ready) {  // ascending id order: agent i before agent j, i < j
    const std::optional<Vec2> goal = choose_for(
        id, cands, matrices.empty() ? nullptr : &matrices, tick);
    AgentSlot& s = slot(id);
    s.pending = false;
    if (!goal) {
      emit("no_candidates", tick, id, {});
      continue;
    }
    ledger_.add(id, *goal, tick);
    if (params_.strategy == StrategyKind::Ours)
      spread_update(matrices, *goal, id, ledger_);
    emit("goal_assignment", tick, id, {{"x", goal->x}, {"y", goal->y}});
    out.push_back({id, *goal});
  }
  sync_wait_since_ = -1;
  emit("sync_round", tick, -1, {{"assignments", out.size()}});
  return out;
}

std::vector<Assignment> Coordinator::sync_round(int tick) {
  std::lock_guard lock(mutex_);
  std::vector<int> ready;
  for (const auto& [id, s] : agents_) {
    if (!s.pending || !s.submission)
      throw RoundIncomplete("sync_round: agent " + std::to_string(id) +
                            " not ready");
    if (ledger_.has_active_goal(id))
      throw RoundIncomplete("sync_round: agent " + std::to_string(id) +
                            " still has an active goal");
    ready.push_back(id);
  }
  return run_sync_round(ready, tick);
}

std::vector<Assignment> Coordinator::decide(int tick) {
  std::lock_guard lock(mutex_);

  std::vector<int> pending;
  for (const auto& [id, s] : agents_)
    if (s.pending) pending.push_back(id);
  if (pending.empty()) return {};

  if (params_.mode == ProtocolMode::Synchronous) {
    bool all_ready = true;
    for (const auto& [id, s] : agents_) {
      if (!s.pending || !s.submission || ledger_.has_active_goal(id)) {
        all_ready = false;
        break;
      }
    }
    if (!all_ready) {
      if (sync_wait_since_ < 0) sync_wait_since_ = tick;
      // Barrier timeout: run the round with whoever is ready.
      if (tick - sync_wait_since_ >= params_.sync_timeout_ticks) {
        std::vector<int> ready;
        for (int id : pending)
          if (slot(id).submission && !ledger_.has_active_goal(id))
            ready.push_back(id);
        if (ready.empty()) return {};
        emit("sync_timeout", tick, -1, {{"ready", ready.size()}});
        return run_sync_round(ready, tick);
      }
      return {};
    }
    return run_sync_round(pending, tick);
  }

  // Asynchronous: serve requests in priority order until one yields a goal.
  // Starved agents (skip counter at the threshold) outrank base priority,
  // oldest starvation first, ties by agent id.
  std::sort(pending.begin(), pending.end(), [this](int a, int b) {
    const AgentSlot& sa = slot(a);
    const AgentSlot& sb = slot(b);
    const bool stva = sa.skip_counter >= params_.goal_skip_wait;
    const bool stvb = sb.skip_counter >= params_.goal_skip_wait;
    if (stva != stvb) return stva;
    if (stva && stvb && sa.starved_since != sb.starved_since)
      return sa.starved_since < sb.starved_since;
    return a < b;
  });

  std::vector<FrontierPoint> cands;
  bool have_cands = false;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const int id = pending[i];
    if (ledger_.has_active_goal(id)) continue;
    if (!have_cands) {
      cands = build_candidates(tick);
      have_cands = true;
    }
    const std::optional<Vec2> goal = choose_for(id, cands, nullptr, tick);
    AgentSlot& winner = slot(id);
    winner.pending = false;
    if (!goal) {
      emit("no_candidates", tick, id, {});
      continue;
    }
    ledger_.add(id, *goal, tick);
    winner.skip_counter = 0;
    winner.starved_since = -1;
    emit("goal_assignment", tick, id, {{"x", goal->x}, {"y", goal->y}});
    // Losers at this decision point wait one more round.
    for (std::size_t j = 0; j < pending.size(); ++j) {
      if (pending[j] == id) continue;
      AgentSlot& loser = slot(pending[j]);
      if (!loser.pending) continue;
      if (loser.skip_counter < params_.goal_skip_wait) {
        ++loser.skip_counter;
        if (loser.skip_counter >= params_.goal_skip_wait)
          loser.starved_since = tick;
      }
    }
    return {{id, *goal}};
  }
  return {};
}

void Coordinator::report_goal_status(int id, GoalStatus status, int tick) {
  std::lock_guard lock(mutex_);
  slot(id);  // UnknownAgent check
  if (status == GoalStatus::Active)
    throw std::invalid_argument("report_goal_status: use Reached/Abandoned");
  if (!ledger_.set_status(id, status, tick))
    throw NoActiveGoal("report_goal_status: agent has no active goal");
  emit("goal_status", tick, id,
       {{"status", status == GoalStatus::Reached ? "reached" : "abandoned"}});
}

}  // namespace coex
