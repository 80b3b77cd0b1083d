#pragma once

#include <string>
#include <vector>

#include "coexplore/scenario.hpp"

namespace coex {

struct MetricsRecord {
  int tick = 0;
  std::vector<Pose2D> poses;
  double coverage = 0.0;
  int raw_frontiers = 0;
  int filtered_frontiers = 0;
  double rad = 0.0;
  double per_unk = 0.0;
  int assignments = 0;  // cumulative
};

struct RunResult {
  std::vector<MetricsRecord> metrics;
  double final_coverage = 0.0;
  OccupancyGrid merged;
  int ticks_run = 0;
};

// Full deterministic simulation. If out_dir is nonempty, writes metrics.csv,
// events.jsonl, final maps (PGM) and run_info.txt there.
RunResult run_simulation(const Scenario& sc, const std::string& out_dir);

struct RunSummary {
  int runs = 0;
  std::vector<double> mean_coverage_curve;
  std::vector<double> std_coverage_curve;
  double mean_raw = 0.0;
  double mean_filtered = 0.0;
  double reduction_percent = 0.0;
  std::vector<std::pair<double, double>> per_unk_usage;  // value, percent
  std::vector<std::pair<double, double>> rad_usage;
  double mean_final_coverage = 0.0;
  bool have_quality = false;
  double mean_rmse = 0.0;
  double mean_ssim = 0.0;
};

// Aggregates metrics.csv files from run directories; map quality is computed
// from each run's merged_final.pgm against the truth map named in
// run_info.txt.
RunSummary summarize_runs(const std::vector<std::string>& run_dirs);
void write_summary(const RunSummary& s, const std::string& out_dir);

struct StrategyComparison {
  StrategyKind strategy;
  ProtocolMode mode;
  double mean_final_coverage = 0.0;
  double std_final_coverage = 0.0;
  std::vector<double> checkpoint_coverage;  // at 25/50/75/100% of tick limit
};

// Runs each (strategy, mode) over the seed set on the scenario template and
// reports mean final coverage, sorted descending.
std::vector<StrategyComparison> compare_strategies(
    const Scenario& base, const std::vector<std::pair<StrategyKind, ProtocolMode>>& variants,
    const std::vector<unsigned>& seeds, const std::string& out_dir);

void write_comparison(const std::vector<StrategyComparison>& rows,
                      const std::string& out_dir);

}  // namespace coex
