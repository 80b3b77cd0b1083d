// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
// Usage: acceptance <source_dir>  (source dir provides maps/ and scenarios/).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coexplore/baselines.hpp"
#include "coexplore/coordinator.hpp"
#include "coexplore/pose_graph.hpp"
#include "coexplore/reward.hpp"
#include "coexplore/sim.hpp"

using namespace coex;
namespace fs = std::filesystem;

namespace {

struct Check {
  int id;
  std::string name;
  bool pass = false;
  std::string detail;
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 4: spanning-tree weight vs exhaustive enumeration.

Check spanning_tree_oracle() {
  Check c{4, "spanning-tree weight matches enumeration"};
  const auto t0 = std::chrono::steady_clock::now();
  auto rel_ok = [](double got, double want) {
    return std::abs(got - want) <= 1e-9 * std::max({1.0, std::abs(want)});
  };

  const PoseGraph triangle =
      PoseGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  const PoseGraph k4 = PoseGraph::from_edges(
      4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  const PoseGraph chain =
      PoseGraph::from_edges(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  if (!rel_ok(std::exp(log_spanning_tree_weight(triangle)), 3.0) ||
      !rel_ok(std::exp(log_spanning_tree_weight(k4)), 16.0) ||
      !rel_ok(std::exp(log_spanning_tree_weight(chain)), 1.0)) {
    c.detail = "exact cases (triangle/K4/chain) disagree";
    return c;
  }

  std::mt19937 rng(20240817);
  int failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> nsize(2, 8);
    const int n = nsize(rng);
    std::uniform_real_distribution<double> wdist(0.5, 3.0);
    std::vector<GraphEdge> edges;
    for (int i = 1; i < n; ++i) {  // random spanning chain
      std::uniform_int_distribution<int> prev(0, i - 1);
      edges.push_back({prev(rng), i, wdist(rng)});
    }
    std::uniform_int_distribution<int> extra(0, n);
    for (int e = extra(rng); e > 0; --e) {
      std::uniform_int_distribution<int> pick(0, n - 1);
      const int i = pick(rng), j = pick(rng);
      if (i == j) continue;
      edges.push_back({i, j, wdist(rng)});
    }
    const PoseGraph g = PoseGraph::from_edges(n, edges);
    const double want = brute_force_spanning_trees(g);
    const double got = std::exp(log_spanning_tree_weight(g));
    if (!rel_ok(got, want)) ++failures;
  }
  const double dt = elapsed_s(t0);
  c.pass = failures == 0 && dt < 10.0;
  c.detail = std::to_string(failures) + "/200 mismatches, " + fmt2(dt) + " s";
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 5: spread-policy arithmetic and properties.

Check spread_policy_suite() {
  Check c{5, "spread policy (K/d^2) fixtures and properties"};

  // Hand-computed fixture: first assignment, K = 7, d = 2 -> penalty 1.75.
  {
    GoalLedger ledger;
    ledger.add(0, {0, 0}, 0);
    std::vector<RewardMatrix> mats{{0, {{10.0, 0, 0}}}, {1, {{7.0, 2, 0}}}};
    spread_update(mats, {0, 0}, 0, ledger);
    if (std::abs(mats[1].rows[0].reward - 5.25) > 1e-12) {
      c.detail = "fixture K=7,d=2 penalty mismatch";
      return c;
    }
  }
  // Third assignment, K = 4/3, d = 2 -> penalty 1/3.
  {
    GoalLedger ledger;
    ledger.add(2, {50, 50}, 0);
    ledger.add(1, {60, 60}, 0);
    ledger.add(0, {0, 0}, 1);
    std::vector<RewardMatrix> mats{{0, {{9.0, 0, 0}}}, {1, {{4.0, 2, 0}}}};
    spread_update(mats, {0, 0}, 0, ledger);
    if (std::abs(mats[1].rows[0].reward - (4.0 - 1.0 / 3.0)) > 1e-12) {
      c.detail = "fixture targets=3 penalty mismatch";
      return c;
    }
  }

  // Inverse-square monotonicity: closer rows always lose at least as much.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ddist(0.26, 12.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double d1 = ddist(rng), d2 = ddist(rng);
    if (d1 > d2) std::swap(d1, d2);
    // eps below the sampled range so neither row is consumed by erasure.
    GoalLedger ledger(0.25, 20);
    ledger.add(0, {0, 0}, 0);
    std::vector<RewardMatrix> mats{{0, {{5.0, 0, 0}}},
                                   {1, {{3.0, d1, 0}, {3.0, d2, 0}}}};
    spread_update(mats, {0, 0}, 0, ledger);
    const double pen1 = 3.0 - mats[1].rows[0].reward;
    const double pen2 = 3.0 - mats[1].rows[1].reward;
    if (pen1 + 1e-12 < pen2 || pen1 <= 0.0 || pen2 <= 0.0) {
      c.detail = "monotonicity violated at d1=" + fmt2(d1) + " d2=" + fmt2(d2);
      return c;
    }
  }

  // Argmax invariance: shifting every reward by a constant does not change
  // which row select_goal picks.
  std::uniform_real_distribution<double> rdist(-5.0, 5.0);
  std::uniform_real_distribution<double> shift_dist(-20.0, 20.0);
  GoalLedger empty;
  for (int trial = 0; trial < 1000; ++trial) {
    RewardMatrix m{0, {}};
    for (int k = 0; k < 8; ++k)
      m.rows.push_back({rdist(rng), static_cast<double>(k), 0.0});
    const auto before = select_goal(m, empty, 0);
    const double shift = shift_dist(rng);
    for (RewardRow& r : m.rows) r.reward += shift;
    const auto after = select_goal(m, empty, 0);
    if (!before || !after ||
        distance(before->position, after->position) > 1e-12) {
      c.detail = "argmax changed under uniform shift";
      return c;
    }
  }
  c.pass = true;
  c.detail = "fixtures + 1000-trial properties";
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 6: protocol suites.

CoordinatorParams protocol_params() {
  CoordinatorParams cp;
  cp.strategy = StrategyKind::Ours;
  cp.filter.per_unk = 0.0;
  cp.filter.max_pts = 100;
  cp.planner.inflation = 0.0;
  cp.goal_skip_wait = 3;
  return cp;
}

bool sync_equal_goal_counts(std::string& why) {
  OccupancyGrid map(24, 24, 0.5, {0, 0}, CellState::Free);
  CoordinatorParams cp = protocol_params();
  cp.mode = ProtocolMode::Synchronous;
  Coordinator coord(cp);
  coord.update_merged_map(&map);
  for (int id = 0; id < 3; ++id) {
    coord.register_agent(id, Transform2D::identity());
    coord.update_agent_state(id, {1.25 + id, 1.25, 0.0}, nullptr);
  }
  std::vector<FrontierPoint> pool;
  for (int k = 0; k < 40; ++k)
    pool.push_back({{1.25 + 0.5 * (k % 20), 7.25 + 0.5 * (k / 20)}, 0});

  std::vector<int> counts(3, 0);
  for (int round = 0; round < 8; ++round) {
    for (int id = 0; id < 3; ++id) {
      coord.submit_frontiers(id, pool, round);
      coord.request_goal(id, round);
    }
    const auto out = coord.sync_round(round);
    if (out.size() != 3) {
      why = "round " + std::to_string(round) + " assigned " +
            std::to_string(out.size()) + "/3";
      return false;
    }
    for (const Assignment& a : out) {
      ++counts[static_cast<std::size_t>(a.agent)];
      coord.report_goal_status(a.agent, GoalStatus::Reached, round);
    }
    if (counts[0] != counts[1] || counts[1] != counts[2]) {
      why = "unequal goal counts after round " + std::to_string(round);
      return false;
    }
  }
  return true;
}

bool async_bounded_starvation(std::string& why) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    OccupancyGrid map(20, 20, 0.5, {0, 0}, CellState::Free);
    CoordinatorParams cp = protocol_params();
    cp.mode = ProtocolMode::Asynchronous;
    Coordinator coord(cp);
    coord.update_merged_map(&map);
    const int n = 4;
    for (int id = 0; id < n; ++id) {
      coord.register_agent(id, Transform2D::identity());
      coord.update_agent_state(id, {1.25 + id, 1.25, 0.0}, nullptr);
      coord.submit_frontiers(
          id, {{{1.25, 8.25}, id}, {{3.25, 8.25}, id}, {{5.25, 8.25}, id},
               {{7.25, 8.25}, id}, {{9.25, 8.25}, id}, {{2.25, 6.25}, id},
               {{4.25, 6.25}, id}, {{6.25, 6.25}, id}, {{8.25, 6.25}, id},
               {{1.75, 4.75}, id}, {{4.75, 4.75}, id}, {{7.75, 4.75}, id}},
          0);
    }
    std::uniform_int_distribution<int> coin(0, 1);
    for (int tick = 0; tick < 16; ++tick) {
      // Random request schedule over agents without an active goal.
      for (int id = 0; id < n; ++id)
        if (!coord.ledger().has_active_goal(id) && coin(rng))
          coord.request_goal(id, tick);

      std::vector<int> starved;
      for (int id = 0; id < n; ++id)
        if (coord.has_pending_request(id) &&
            coord.skip_counter(id) >= cp.goal_skip_wait)
          starved.push_back(id);

      const auto out = coord.decide(tick);

      for (int id = 0; id < n; ++id) {
        if (coord.skip_counter(id) > cp.goal_skip_wait) {
          why = "trial " + std::to_string(trial) + ": counter above threshold";
          return false;
        }
      }
      if (!out.empty() && !starved.empty()) {
        const bool winner_starved =
            std::find(starved.begin(), starved.end(), out[0].agent) !=
            starved.end();
        if (!winner_starved) {
          why = "trial " + std::to_string(trial) +
                ": non-starved agent served before a starved one";
          return false;
        }
      }
      // Random goal completion keeps the pool contested.
      for (const Assignment& a : out)
        if (coin(rng))
          coord.report_goal_status(a.agent, GoalStatus::Abandoned, tick);
    }
  }
  return true;
}

bool determinism_bytes(const Scenario& office, std::string& why) {
  Scenario sc = office;
  sc.tick_limit = std::min(sc.tick_limit, 80);
  sc.seed = 5;
  const fs::path base = fs::temp_directory_path() / "coex_acceptance_det";
  fs::remove_all(base);
  run_simulation(sc, (base / "a").string());
  run_simulation(sc, (base / "b").string());
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const char* f : {"events.jsonl", "metrics.csv", "merged_final.pgm"}) {
    if (slurp(base / "a" / f) != slurp(base / "b" / f)) {
      why = std::string(f) + " differs between identical runs";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 7: filter oracle.

double oracle_unknown_pct(const OccupancyGrid& m, Vec2 p, double rad) {
  std::size_t total = 0, unknown = 0;
  for (int row = 0; row < m.height(); ++row) {
    for (int col = 0; col < m.width(); ++col) {
      if (distance(m.cell_center({row, col}), p) > rad + 1e-12) continue;
      ++total;
      if (m.at({row, col}) == CellState::Unknown) ++unknown;
    }
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(unknown) / total;
}

Check filter_oracle() {
  Check c{7, "frontier filter matches exhaustive oracle"};
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    OccupancyGrid map(50, 50, 0.5, {0, 0});
    for (int row = 0; row < 50; ++row)
      for (int col = 0; col < 50; ++col) {
        const double r = u(rng);
        map.set({row, col}, r < 0.25  ? CellState::Occupied
                            : r < 0.6 ? CellState::Free
                                      : CellState::Unknown);
      }
    FilterParams fp;
    fp.rad = 0.5 + 0.25 * (trial % 6);
    fp.per_unk = 10.0 * (trial % 10);
    std::vector<FrontierPoint> pts;
    for (int k = 0; k < 30; ++k)
      pts.push_back({{u(rng) * 25.0, u(rng) * 25.0}, 0});

    for (const FrontierPoint& p : pts) {
      const double got = unknown_percentage(map, p.position, fp.rad);
      const double want = oracle_unknown_pct(map, p.position, fp.rad);
      if (std::abs(got - want) > 1e-9) {
        c.detail = "unknown_percentage mismatch";
        return c;
      }
    }
    const auto kept = filter_points(pts, map, fp);
    std::vector<FrontierPoint> want;
    for (const FrontierPoint& p : pts) {
      if (!map.contains(p.position)) continue;
      if (map.at(map.world_to_cell(p.position)) == CellState::Occupied)
        continue;
      if (oracle_unknown_pct(map, p.position, fp.rad) >= fp.per_unk - 1e-12)
        want.push_back(p);
    }
    if (kept.size() != want.size()) {
      c.detail = "filter_points kept a different set";
      return c;
    }
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (distance(kept[i].position, want[i].position) > 1e-12) {
        c.detail = "filter_points order mismatch";
        return c;
      }
  }

  // Adversarial adaptation fixtures: contradictory min/max demands must still
  // terminate within max_adapt_iters refilter passes.
  OccupancyGrid half(40, 40, 0.5, {0, 0}, CellState::Free);
  for (int row = 0; row < 40; ++row)
    for (int col = 20; col < 40; ++col) half.set({row, col}, CellState::Unknown);
  std::vector<FrontierPoint> crowd;
  for (int k = 0; k < 25; ++k) crowd.push_back({{9.75, 0.75 + 0.7 * k}, 0});
  FilterParams tight;
  tight.min_pts = 24;
  tight.max_pts = 2;  // unsatisfiable: forces the loop to its iteration cap
  tight.per_unk = 90.0;
  const AdaptiveFilterResult res = adaptive_filter(crowd, half, tight);
  if (res.passes > tight.max_adapt_iters) {
    c.detail = "adaptive_filter exceeded max_adapt_iters";
    return c;
  }
  FilterParams starved;
  starved.min_pts = 10;
  starved.max_pts = 20;
  starved.per_unk = 100.0;
  const AdaptiveFilterResult res2 =
      adaptive_filter({{{1.25, 1.25}, 0}}, half, starved);
  if (res2.passes > starved.max_adapt_iters || res2.params.per_unk < 0.0) {
    c.detail = "adaptive_filter per_unk floor violated";
    return c;
  }
  c.pass = true;
  c.detail = "100 random maps + adversarial adaptation fixtures";
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 8: planner oracle (Bellman-Ford relaxation, same cost model).

std::optional<double> oracle_plan_cost(const OccupancyGrid& map, Vec2 start,
                                       Vec2 goal, const PlannerParams& pp) {
  const int w = map.width(), h = map.height();
  const std::vector<bool> blocked = inflate_obstacles(map, pp.inflation);
  const CellIndex sc = map.world_to_cell(start);
  const int start_k = sc.row * w + sc.col;
  auto traversable = [&](int k) {
    if (k == start_k) return true;
    if (blocked[static_cast<std::size_t>(k)]) return false;
    return map.cells()[static_cast<std::size_t>(k)] != CellState::Occupied;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, inf);
  dist[start_k] = 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int row = 0; row < h; ++row)
      for (int col = 0; col < w; ++col) {
        const int k = row * w + col;
        if (dist[k] == inf) continue;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            if (!dr && !dc) continue;
            const CellIndex nb{row + dr, col + dc};
            if (!map.in_bounds(nb)) continue;
            const int nk = nb.row * w + nb.col;
            if (!traversable(nk)) continue;
            double step = (dr && dc ? std::sqrt(2.0) : 1.0) * map.resolution();
            if (map.at(nb) == CellState::Unknown) step *= pp.unknown_cost;
            if (dist[k] + step < dist[nk] - 1e-15) {
              dist[nk] = dist[k] + step;
              changed = true;
            }
          }
      }
  }
  const CellIndex gc = map.world_to_cell(goal);
  const double d = dist[gc.row * w + gc.col];
  if (d == inf) return std::nullopt;
  return d;
}

Check planner_oracle() {
  Check c{8, "planner cost matches brute-force oracle"};
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0, compared = 0;
  for (int trial = 0; trial < 200 && compared < 100; ++trial) {
    OccupancyGrid map(30, 30, 0.5, {0, 0});
    for (int row = 0; row < 30; ++row)
      for (int col = 0; col < 30; ++col) {
        const double r = u(rng);
        map.set({row, col}, r < 0.2   ? CellState::Occupied
                            : r < 0.65 ? CellState::Free
                                       : CellState::Unknown);
      }
    PlannerParams pp;
    pp.inflation = trial % 2 ? 0.5 : 0.0;
    auto cell_pt = [&] {
      return Vec2{0.25 + std::floor(u(rng) * 30) * 0.5,
                  0.25 + std::floor(u(rng) * 30) * 0.5};
    };
    const Vec2 start = cell_pt(), goal = cell_pt();
    if (map.at(map.world_to_cell(start)) == CellState::Occupied) continue;
    const auto want = oracle_plan_cost(map, start, goal, pp);
    const auto got = plan_path_cost(map, start, goal, pp);
    ++compared;
    if (want.has_value() != got.has_value()) {
      ++mismatches;
    } else if (want && std::abs(*want - *got) > 1e-9) {
      ++mismatches;
    }
  }
  c.pass = mismatches == 0 && compared >= 80;
  c.detail = std::to_string(mismatches) + " mismatches over " +
             std::to_string(compared) + " grids";
  return c;
}

// ---------------------------------------------------------------------------
// Simulation batches (criteria 1, 2, 3, 9).

struct Batch {
  std::vector<RunResult> runs;
  double mean_final = 0.0;
  double seconds = 0.0;
};

Batch run_batch(const Scenario& base, StrategyKind strategy, ProtocolMode mode,
                const std::vector<unsigned>& seeds) {
  Batch b;
  const auto t0 = std::chrono::steady_clock::now();
  double sum = 0.0;
  for (unsigned seed : seeds) {
    Scenario sc = base;
    sc.strategy = strategy;
    sc.mode = mode;
    sc.seed = seed;
    b.runs.push_back(run_simulation(sc, ""));
    sum += b.runs.back().final_coverage;
  }
  b.mean_final = sum / seeds.size();
  b.seconds = elapsed_s(t0);
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <source_dir>\n");
    return 2;
  }
  const fs::path src(argv[1]);
  const std::string scenario_path =
      (src / "scenarios" / "office_3_async.cfg").string();

  std::vector<Check> checks;

  Scenario office;
  bool have_scenario = true;
  try {
    office = load_scenario(scenario_path);
  } catch (const std::exception& e) {
    have_scenario = false;
    std::fprintf(stderr, "cannot load %s: %s\n", scenario_path.c_str(),
                 e.what());
  }

  const std::vector<unsigned> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  Batch ours_async, greedy, mags, ours_sync;
  if (have_scenario) {
    ours_async =
        run_batch(office, StrategyKind::Ours, ProtocolMode::Asynchronous, seeds);
    greedy = run_batch(office, StrategyKind::FrontierGreedy,
                       ProtocolMode::Asynchronous, seeds);
    mags = run_batch(office, StrategyKind::Mags, ProtocolMode::Asynchronous,
                     seeds);
    ours_sync =
        run_batch(office, StrategyKind::Ours, ProtocolMode::Synchronous, seeds);
  }

  // Criterion 1: frontier point reduction on the office map.
  {
    Check c{1, "filtered list <= 50% of raw merged list (office, 10 seeds)"};
    if (have_scenario) {
      double raw = 0.0, filtered = 0.0;
      std::size_t cycles = 0;
      for (const RunResult& r : ours_async.runs)
        for (const MetricsRecord& m : r.metrics) {
          if (m.raw_frontiers <= 0) continue;
          raw += m.raw_frontiers;
          filtered += m.filtered_frontiers;
          ++cycles;
        }
      const double mean_raw = cycles ? raw / cycles : 0.0;
      const double mean_filtered = cycles ? filtered / cycles : 0.0;
      c.pass = cycles > 0 && mean_filtered <= 0.5 * mean_raw &&
               ours_async.seconds < 120.0;
      c.detail = "mean raw " + fmt2(mean_raw) + ", mean filtered " +
                 fmt2(mean_filtered) + " (" +
                 fmt2(mean_raw > 0 ? 100.0 * (1.0 - mean_filtered / mean_raw)
                                   : 0.0) +
                 "% reduction), " + fmt2(ours_async.seconds) + " s";
    } else {
      c.detail = "scenario unavailable";
    }
    checks.push_back(c);
  }

  // Criterion 2: coverage ordering Ours >= Greedy, Ours - MAGS >= 3 pp.
  {
    Check c{2, "coverage ordering ours >= greedy, ours - mags >= 3 pp"};
    if (have_scenario) {
      const double total_s =
          ours_async.seconds + greedy.seconds + mags.seconds;
      c.pass = ours_async.mean_final >= greedy.mean_final &&
               ours_async.mean_final - mags.mean_final >= 3.0 &&
               total_s < 600.0;
      c.detail = "ours " + fmt2(ours_async.mean_final) + "%, greedy " +
                 fmt2(greedy.mean_final) + "%, mags " +
                 fmt2(mags.mean_final) + "%, " + fmt2(total_s) + " s";
    } else {
      c.detail = "scenario unavailable";
    }
    checks.push_back(c);
  }

  // Criterion 3: async does not lose to sync.
  {
    Check c{3, "ours(async) >= ours(sync) - 1 pp"};
    if (have_scenario) {
      c.pass = ours_async.mean_final >= ours_sync.mean_final - 1.0;
      c.detail = "async " + fmt2(ours_async.mean_final) + "%, sync " +
                 fmt2(ours_sync.mean_final) + "%";
    } else {
      c.detail = "scenario unavailable";
    }
    checks.push_back(c);
  }

  checks.push_back(spanning_tree_oracle());
  checks.push_back(spread_policy_suite());

  // Criterion 6: protocol suites.
  {
    Check c{6, "protocol invariants (sync counts, starvation, determinism)"};
    std::string why;
    if (!sync_equal_goal_counts(why)) {
      c.detail = "sync: " + why;
    } else if (!async_bounded_starvation(why)) {
      c.detail = "async: " + why;
    } else if (have_scenario && !determinism_bytes(office, why)) {
      c.detail = "determinism: " + why;
    } else if (!have_scenario) {
      c.detail = "scenario unavailable";
    } else {
      c.pass = true;
      c.detail = "scripted rounds + 1000 randomized schedules + byte equality";
    }
    checks.push_back(c);
  }

  checks.push_back(filter_oracle());
  checks.push_back(planner_oracle());

  // Criterion 9: map quality sanity.
  {
    Check c{9, "map quality: identity perfect, explored beats all-unknown"};
    if (have_scenario && !ours_async.runs.empty()) {
      const OccupancyGrid truth = load_pgm(office.map_pgm, office.map_meta);
      const MapQuality ident = map_quality(truth, truth);
      const OccupancyGrid blank(truth.width(), truth.height(),
                                truth.resolution(), truth.origin());
      const MapQuality base = map_quality(blank, truth);
      const MapQuality explored =
          map_quality(ours_async.runs[0].merged, truth);
      c.pass = ident.rmse == 0.0 && std::abs(ident.ssim - 1.0) < 1e-12 &&
               explored.rmse < base.rmse && explored.ssim > base.ssim;
      c.detail = "explored rmse " + fmt2(explored.rmse) + " vs blank " +
                 fmt2(base.rmse) + "; ssim " + fmt2(explored.ssim) + " vs " +
                 fmt2(base.ssim);
    } else {
      c.detail = "scenario unavailable";
    }
    checks.push_back(c);
  }

  std::sort(checks.begin(), checks.end(),
            [](const Check& a, const Check& b) { return a.id < b.id; });
  int failures = 0;
  for (const Check& c : checks) {
    std::printf("[%s] criterion %d: %s — %s\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.detail.c_str());
    if (!c.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(checks.size()) - failures,
              checks.size());
  return failures == 0 ? 0 : 1;
}
