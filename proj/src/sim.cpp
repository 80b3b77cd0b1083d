#include "coexplore/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

namespace coex {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<Pose2D> jittered_spawns(const Scenario& sc,
                                    const OccupancyGrid& truth) {
  std::vector<Pose2D> spawns = sc.spawns;
  if (sc.spawn_jitter > 0.0) {
    std::mt19937 rng(sc.seed);
    std::uniform_real_distribution<double> jit(-sc.spawn_jitter,
                                               sc.spawn_jitter);
    for (Pose2D& p : spawns) {
      const Pose2D moved{p.x + jit(rng), p.y + jit(rng), p.theta};
      const CellIndex c = truth.world_to_cell(moved.position());
      if (truth.in_bounds(c) && truth.at(c) == CellState::Free) p = moved;
    }
  }
  for (const Pose2D& p : spawns) {
    const CellIndex c = truth.world_to_cell(p.position());
    if (!truth.in_bounds(c) || truth.at(c) != CellState::Free)
      throw ScenarioInvalid("spawn pose not in a Free truth cell");
  }
  return spawns;
}

}  // namespace

RunResult run_simulation(const Scenario& sc, const std::string& out_dir) {
  const OccupancyGrid truth = load_pgm(sc.map_pgm, sc.map_meta);
  const std::vector<Pose2D> spawns = jittered_spawns(sc, truth);
  const int n_agents = static_cast<int>(spawns.size());

  std::ofstream events;
  std::ofstream metrics_csv;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    events.open(out_dir + "/events.jsonl");
    metrics_csv.open(out_dir + "/metrics.csv");
  }

  Coordinator::EventSink sink;
  if (events.is_open())
    sink = [&events](const nlohmann::json& ev) { events << ev.dump() << "\n"; };

  Coordinator coord(sc.coordinator_params(), sink);

  std::vector<Agent> agents;
  std::vector<Transform2D> transforms(n_agents, Transform2D::identity());
  agents.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    AgentParams ap = sc.agent_params(i);
    ap.spawn = spawns[i];
    agents.emplace_back(ap, truth);
    coord.register_agent(i, transforms[i]);
  }

  std::vector<Vec2> spawn_points;
  for (const Pose2D& p : spawns) spawn_points.push_back(p.position());

  if (metrics_csv.is_open()) {
    metrics_csv << "tick,coverage_pct,raw_frontiers,filtered_frontiers,rad,"
                   "per_unk,assignments";
    for (int i = 0; i < n_agents; ++i)
      metrics_csv << ",a" << i << "_x,a" << i << "_y,a" << i << "_theta";
    metrics_csv << "\n";
  }

  RunResult result;
  OccupancyGrid merged;
  int total_assignments = 0;

  // Assignments are delivered after a latency proportional to the number of
  // candidates the decision had to score: the coordinator's computation is
  // charged in simulated time, so pruning the candidate list buys faster
  // goal turnaround.
  struct PendingDelivery {
    int deliver_tick;
    Assignment asg;
  };
  std::vector<PendingDelivery> in_flight;

  for (int tick = 0; tick <= sc.tick_limit; ++tick) {
    std::erase_if(in_flight, [&](const PendingDelivery& p) {
      if (p.deliver_tick > tick) return false;
      agents[static_cast<std::size_t>(p.asg.agent)].receive_goal(p.asg.goal);
      ++total_assignments;
      return true;
    });

    for (Agent& a : agents) a.tick(truth, coord, tick);

    std::vector<OccupancyGrid> locals;
    locals.reserve(n_agents);
    for (const Agent& a : agents) locals.push_back(a.local_map());
    merged = merge_maps(locals, transforms);

    coord.update_merged_map(&merged);
    for (Agent& a : agents)
      coord.update_agent_state(a.id(), a.pose(), &a.pose_graph());

    const std::vector<Assignment> assigned = coord.decide(tick);
    if (!assigned.empty()) {
      // Ours scores only the filtered list; the baselines score every raw
      // merged candidate per decision.
      int evals = 0;
      if (const auto& stats = coord.last_cycle_stats()) {
        evals = sc.strategy == StrategyKind::Ours ? stats->filtered_count
                                                  : stats->raw_count;
      }
      const int delay = evals / sc.evals_per_tick;
      for (const Assignment& asg : assigned) {
        if (delay == 0) {
          agents[static_cast<std::size_t>(asg.agent)].receive_goal(asg.goal);
          ++total_assignments;
        } else {
          in_flight.push_back({tick + delay, asg});
        }
      }
    }

    MetricsRecord rec;
    rec.tick = tick;
    for (const Agent& a : agents) rec.poses.push_back(a.pose());
    rec.coverage = coverage_percent(merged, truth, spawn_points);
    if (const auto& stats = coord.last_cycle_stats()) {
      rec.raw_frontiers = stats->raw_count;
      rec.filtered_frontiers = stats->filtered_count;
      rec.rad = stats->rad;
      rec.per_unk = stats->per_unk;
    } else {
      rec.rad = coord.filter_params().rad;
      rec.per_unk = coord.filter_params().per_unk;
    }
    rec.assignments = total_assignments;

    if (metrics_csv.is_open()) {
      metrics_csv << rec.tick << ',' << fmt(rec.coverage) << ','
                  << rec.raw_frontiers << ',' << rec.filtered_frontiers << ','
                  << fmt(rec.rad) << ',' << fmt(rec.per_unk) << ','
                  << rec.assignments;
      for (const Pose2D& p : rec.poses)
        metrics_csv << ',' << fmt(p.x) << ',' << fmt(p.y) << ','
                    << fmt(p.theta);
      metrics_csv << "\n";
    }
    result.metrics.push_back(std::move(rec));
    result.ticks_run = tick;

    if (result.metrics.back().coverage >= sc.stop_coverage) break;
  }

  result.final_coverage = result.metrics.back().coverage;
  result.merged = merged;

  if (!out_dir.empty()) {
    save_pgm(merged, out_dir + "/merged_final.pgm");
    save_pgm_meta(merged, out_dir + "/merged_final.meta");
    for (const Agent& a : agents) {
      save_pgm(a.local_map(),
               out_dir + "/agent_" + std::to_string(a.id()) + "_map.pgm");
      std::ofstream pg(out_dir + "/agent_" + std::to_string(a.id()) +
                       "_pose_graph.txt");
      pg << a.pose_graph().to_edge_list();
    }
    std::ofstream info(out_dir + "/run_info.txt");
    info << "map_pgm " << sc.map_pgm << "\n"
         << "map_meta " << sc.map_meta << "\n"
         << "strategy " << strategy_name(sc.strategy) << "\n"
         << "mode "
         << (sc.mode == ProtocolMode::Synchronous ? "sync" : "async") << "\n"
         << "seed " << sc.seed << "\n"
         << "ticks_run " << result.ticks_run << "\n"
         << "final_coverage " << fmt(result.final_coverage) << "\n"
         << "spawns";
    for (const Pose2D& p : spawns)
      info << " " << fmt(p.x) << " " << fmt(p.y) << " " << fmt(p.theta);
    info << "\n";
  }
  return result;
}

namespace {

struct ParsedRun {
  std::vector<double> coverage;
  std::vector<int> raw, filtered;
  std::vector<double> rad, per_unk;
  std::string map_pgm, map_meta, merged_pgm, merged_meta;
  std::vector<Vec2> spawns;
};

ParsedRun parse_run_dir(const std::string& dir) {
  ParsedRun r;
  std::ifstream csv(dir + "/metrics.csv");
  if (!csv) throw std::runtime_error("no metrics.csv in " + dir);
  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line)) {
    std::istringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() < 7) continue;
    r.coverage.push_back(std::stod(cols[1]));
    r.raw.push_back(std::stoi(cols[2]));
    r.filtered.push_back(std::stoi(cols[3]));
    r.rad.push_back(std::stod(cols[4]));
    r.per_unk.push_back(std::stod(cols[5]));
  }
  std::ifstream info(dir + "/run_info.txt");
  std::string key;
  while (info >> key) {
    if (key == "map_pgm") info >> r.map_pgm;
    else if (key == "map_meta") info >> r.map_meta;
    else if (key == "spawns") {
      double x, y, t;
      while (info >> x >> y >> t) r.spawns.push_back({x, y});
    } else {
      std::string skip;
      std::getline(info, skip);
    }
  }
  r.merged_pgm = dir + "/merged_final.pgm";
  r.merged_meta = dir + "/merged_final.meta";
  return r;
}

}  // namespace

RunSummary summarize_runs(const std::vector<std::string>& run_dirs) {
  if (run_dirs.empty()) throw std::invalid_argument("summarize: no runs");
  std::vector<ParsedRun> runs;
  for (const std::string& d : run_dirs) runs.push_back(parse_run_dir(d));

  RunSummary s;
  s.runs = static_cast<int>(runs.size());

  std::size_t max_len = 0;
  for (const ParsedRun& r : runs) max_len = std::max(max_len, r.coverage.size());
  s.mean_coverage_curve.resize(max_len, 0.0);
  s.std_coverage_curve.resize(max_len, 0.0);
  for (std::size_t t = 0; t < max_len; ++t) {
    double sum = 0.0, sq = 0.0;
    for (const ParsedRun& r : runs) {
      // Runs that stopped early hold their final value.
      const double v = t < r.coverage.size() ? r.coverage[t]
                                             : r.coverage.back();
      sum += v;
      sq += v * v;
    }
    const double mean = sum / runs.size();
    s.mean_coverage_curve[t] = mean;
    s.std_coverage_curve[t] = std::sqrt(std::max(0.0, sq / runs.size() - mean * mean));
  }

  double raw_sum = 0.0, filt_sum = 0.0;
  std::size_t cycle_count = 0;
  std::map<double, std::size_t> per_unk_hist, rad_hist;
  double final_sum = 0.0;
  for (const ParsedRun& r : runs) {
    for (std::size_t t = 0; t < r.raw.size(); ++t) {
      if (r.raw[t] <= 0) continue;  // no filtering cycle ran this tick
      raw_sum += r.raw[t];
      filt_sum += r.filtered[t];
      ++per_unk_hist[r.per_unk[t]];
      ++rad_hist[r.rad[t]];
      ++cycle_count;
    }
    final_sum += r.coverage.back();
  }
  s.mean_final_coverage = final_sum / runs.size();
  if (cycle_count > 0) {
    s.mean_raw = raw_sum / cycle_count;
    s.mean_filtered = filt_sum / cycle_count;
    s.reduction_percent =
        s.mean_raw > 0 ? 100.0 * (1.0 - s.mean_filtered / s.mean_raw) : 0.0;
    for (const auto& [v, c] : per_unk_hist)
      s.per_unk_usage.push_back({v, 100.0 * c / cycle_count});
    for (const auto& [v, c] : rad_hist)
      s.rad_usage.push_back({v, 100.0 * c / cycle_count});
  }

  // Map quality against the truth map recorded by each run.
  double rmse_sum = 0.0, ssim_sum = 0.0;
  int quality_count = 0;
  for (const ParsedRun& r : runs) {
    if (r.map_pgm.empty()) continue;
    if (!std::filesystem::exists(r.merged_pgm) ||
        !std::filesystem::exists(r.map_pgm))
      continue;
    const OccupancyGrid truth = load_pgm(r.map_pgm, r.map_meta);
    const OccupancyGrid merged = load_pgm(r.merged_pgm, r.merged_meta);
    if (merged.width() != truth.width() || merged.height() != truth.height())
      continue;
    const MapQuality q = map_quality(merged, truth);
    rmse_sum += q.rmse;
    ssim_sum += q.ssim;
    ++quality_count;
  }
  if (quality_count > 0) {
    s.have_quality = true;
    s.mean_rmse = rmse_sum / quality_count;
    s.mean_ssim = ssim_sum / quality_count;
  }
  return s;
}

void write_summary(const RunSummary& s, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(out_dir + "/summary.csv");
    csv << "tick,mean_coverage,std_coverage\n";
    for (std::size_t t = 0; t < s.mean_coverage_curve.size(); ++t)
      csv << t << ',' << fmt(s.mean_coverage_curve[t]) << ','
          << fmt(s.std_coverage_curve[t]) << "\n";
  }
  std::ofstream txt(out_dir + "/summary.txt");
  txt << "runs: " << s.runs << "\n"
      << "mean final coverage: " << fmt(s.mean_final_coverage) << " %\n"
      << "mean raw frontier count: " << fmt(s.mean_raw) << "\n"
      << "mean filtered frontier count: " << fmt(s.mean_filtered) << "\n"
      << "frontier reduction: " << fmt(s.reduction_percent) << " %\n";
  txt << "PER_UNK usage:\n";
  for (const auto& [v, pct] : s.per_unk_usage)
    txt << "  " << fmt(v) << " % -> " << fmt(pct) << " % of cycles\n";
  txt << "RAD usage:\n";
  for (const auto& [v, pct] : s.rad_usage)
    txt << "  " << fmt(v) << " m -> " << fmt(pct) << " % of cycles\n";
  if (s.have_quality) {
    txt << "mean RMSE vs truth: " << fmt(s.mean_rmse) << "\n"
        << "mean SSIM vs truth: " << fmt(s.mean_ssim) << "\n";
  }
}

std::vector<StrategyComparison> compare_strategies(
    const Scenario& base,
    const std::vector<std::pair<StrategyKind, ProtocolMode>>& variants,
    const std::vector<unsigned>& seeds, const std::string& out_dir) {
  if (variants.empty() || seeds.empty())
    throw std::invalid_argument("compare: need variants and seeds");
  std::vector<StrategyComparison> rows;
  for (const auto& [strategy, mode] : variants) {
    StrategyComparison row;
    row.strategy = strategy;
    row.mode = mode;
    std::vector<double> finals;
    std::vector<std::vector<double>> curves;
    for (unsigned seed : seeds) {
      Scenario sc = base;
      sc.strategy = strategy;
      sc.mode = mode;
      sc.seed = seed;
      std::string dir;
      if (!out_dir.empty()) {
        dir = out_dir + "/" + strategy_name(strategy) + "_" +
              (mode == ProtocolMode::Synchronous ? "sync" : "async") +
              "/seed_" + std::to_string(seed);
      }
      const RunResult res = run_simulation(sc, dir);
      finals.push_back(res.final_coverage);
      std::vector<double> curve;
      for (const MetricsRecord& m : res.metrics) curve.push_back(m.coverage);
      curves.push_back(std::move(curve));
    }
    double sum = 0.0, sq = 0.0;
    for (double v : finals) {
      sum += v;
      sq += v * v;
    }
    row.mean_final_coverage = sum / finals.size();
    row.std_final_coverage = std::sqrt(
        std::max(0.0, sq / finals.size() - row.mean_final_coverage *
                                               row.mean_final_coverage));
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
      const std::size_t t =
          static_cast<std::size_t>(frac * base.tick_limit);
      double csum = 0.0;
      for (const auto& curve : curves)
        csum += t < curve.size() ? curve[t] : curve.back();
      row.checkpoint_coverage.push_back(csum / curves.size());
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const StrategyComparison& a, const StrategyComparison& b) {
              return a.mean_final_coverage > b.mean_final_coverage;
            });
  if (!out_dir.empty()) write_comparison(rows, out_dir);
  return rows;
}

void write_comparison(const std::vector<StrategyComparison>& rows,
                      const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir + "/compare.csv");
  csv << "strategy,mode,mean_final_coverage,std_final_coverage,"
         "cov_25,cov_50,cov_75,cov_100\n";
  std::ofstream txt(out_dir + "/compare.txt");
  for (const StrategyComparison& r : rows) {
    const std::string mode =
        r.mode == ProtocolMode::Synchronous ? "sync" : "async";
    csv << strategy_name(r.strategy) << ',' << mode << ','
        << fmt(r.mean_final_coverage) << ',' << fmt(r.std_final_coverage);
    for (double c : r.checkpoint_coverage) csv << ',' << fmt(c);
    csv << "\n";
    txt << strategy_name(r.strategy) << " (" << mode
        << "): mean final coverage " << fmt(r.mean_final_coverage) << " % (std "
        << fmt(r.std_final_coverage) << ")\n";
  }
  // Pairwise deltas of mean final coverage.
  txt << "pairwise deltas:\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      txt << "  " << strategy_name(rows[i].strategy) << " - "
          << strategy_name(rows[j].strategy) << ": "
          << fmt(rows[i].mean_final_coverage - rows[j].mean_final_coverage)
          << " pp\n";
    }
  }
}

}  // namespace coex
