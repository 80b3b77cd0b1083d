#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coexplore/protocol_server.hpp"
#include "coexplore/sim.hpp"

namespace {

std::vector<std::pair<coex::StrategyKind, coex::ProtocolMode>>
parse_variants(const std::vector<std::string>& names, coex::ProtocolMode mode) {
  std::vector<std::pair<coex::StrategyKind, coex::ProtocolMode>> out;
  for (const std::string& n : names) {
    const auto colon = n.find(':');
    if (colon == std::string::npos) {
      out.push_back({coex::parse_strategy(n), mode});
    } else {
      out.push_back({coex::parse_strategy(n.substr(0, colon)),
                     coex::parse_mode(n.substr(colon + 1))});
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-robot frontier exploration simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", strategy, mode;
  int seed = -1, ticks = -1;

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--strategy", strategy, "ours | mags | greedy");
  run->add_option("--mode", mode, "sync | async");
  run->add_option("--seed", seed, "seed override");
  run->add_option("--ticks", ticks, "tick limit override");

  std::vector<std::string> run_dirs;
  CLI::App* summarize = app.add_subcommand("summarize", "aggregate run dirs");
  summarize->add_option("--runs", run_dirs, "run directories")->required();
  summarize->add_option("--out", out_dir, "output directory");

  std::vector<std::string> variant_names;
  std::vector<unsigned> seeds;
  CLI::App* compare = app.add_subcommand("compare", "compare strategies");
  compare->add_option("--scenario", scenario_path, "scenario template")
      ->required();
  compare
      ->add_option("--strategies", variant_names,
                   "strategy or strategy:mode entries")
      ->required();
  compare->add_option("--seeds", seeds, "seed list")->required();
  compare->add_option("--out", out_dir, "output directory");
  compare->add_option("--ticks", ticks, "tick limit override");
  compare->add_option("--mode", mode, "default protocol mode");

  std::string map_pgm, map_meta;
  int port = 7300;
  CLI::App* serve = app.add_subcommand(
      "serve", "run the coordinator as a JSONL socket server");
  serve->add_option("--map", map_pgm, "merged map PGM")->required();
  serve->add_option("--meta", map_meta, "map metadata file");
  serve->add_option("--port", port, "TCP port (default 7300)");
  serve->add_option("--strategy", strategy, "ours | mags | greedy");
  serve->add_option("--mode", mode, "sync | async");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      coex::Scenario sc = coex::load_scenario(scenario_path);
      if (!strategy.empty()) sc.strategy = coex::parse_strategy(strategy);
      if (!mode.empty()) sc.mode = coex::parse_mode(mode);
      if (seed >= 0) sc.seed = static_cast<unsigned>(seed);
      if (ticks >= 0) sc.tick_limit = ticks;
      const coex::RunResult res = coex::run_simulation(sc, out_dir);
      std::cout << "ticks: " << res.ticks_run
                << "  final coverage: " << res.final_coverage << " %\n"
                << "outputs in " << out_dir << "\n";
    } else if (summarize->parsed()) {
      const coex::RunSummary s = coex::summarize_runs(run_dirs);
      coex::write_summary(s, out_dir);
      std::cout << "summarized " << s.runs << " runs; mean final coverage "
                << s.mean_final_coverage << " %, frontier reduction "
                << s.reduction_percent << " %\n"
                << "outputs in " << out_dir << "\n";
    } else if (compare->parsed()) {
      coex::Scenario sc = coex::load_scenario(scenario_path);
      if (ticks >= 0) sc.tick_limit = ticks;
      const coex::ProtocolMode default_mode =
          mode.empty() ? sc.mode : coex::parse_mode(mode);
      const auto rows = coex::compare_strategies(
          sc, parse_variants(variant_names, default_mode), seeds, out_dir);
      for (const auto& r : rows) {
        std::cout << coex::strategy_name(r.strategy) << " ("
                  << (r.mode == coex::ProtocolMode::Synchronous ? "sync"
                                                                : "async")
                  << "): " << r.mean_final_coverage << " %\n";
      }
      std::cout << "outputs in " << out_dir << "\n";
    } else if (serve->parsed()) {
      if (map_meta.empty())
        map_meta = map_pgm.substr(0, map_pgm.rfind('.')) + ".meta";
      const coex::OccupancyGrid merged = coex::load_pgm(map_pgm, map_meta);
      coex::CoordinatorParams cp;
      if (!strategy.empty()) cp.strategy = coex::parse_strategy(strategy);
      if (!mode.empty()) cp.mode = coex::parse_mode(mode);
      coex::Coordinator coord(cp, [](const nlohmann::json& ev) {
        std::cout << ev.dump() << "\n";
      });
      coord.update_merged_map(&merged);
      coex::ProtocolServer server(coord, port);
      server.start();
      std::cout << "coordinator listening on 127.0.0.1:" << server.port()
                << "\n";
      // Serve until killed.
      for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
