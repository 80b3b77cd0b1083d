#include "coexplore/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace coex {

namespace {

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

SectionMap parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioInvalid("cannot open scenario file: " + path);
  SectionMap sections;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioInvalid(path + ":" + std::to_string(lineno) +
                            ": expected 'key = value'");
    sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return sections;
}

class Reader {
 public:
  Reader(const SectionMap& s, const std::string& path) : s_(s), path_(path) {}

  std::string str(const std::string& sec, const std::string& key,
                  const std::string& def) const {
    const auto si = s_.find(sec);
    if (si == s_.end()) return def;
    const auto ki = si->second.find(key);
    return ki == si->second.end() ? def : ki->second;
  }
  std::string require(const std::string& sec, const std::string& key) const {
    const std::string v = str(sec, key, "");
    if (v.empty())
      throw ScenarioInvalid(path_ + ": missing [" + sec + "] " + key);
    return v;
  }
  double num(const std::string& sec, const std::string& key, double def) const {
    const std::string v = str(sec, key, "");
    return v.empty() ? def : std::stod(v);
  }
  int integer(const std::string& sec, const std::string& key, int def) const {
    const std::string v = str(sec, key, "");
    return v.empty() ? def : std::stoi(v);
  }
  bool has_section(const std::string& sec) const { return s_.count(sec) > 0; }

 private:
  const SectionMap& s_;
  std::string path_;
};

}  // namespace

ProtocolMode parse_mode(const std::string& s) {
  if (s == "sync" || s == "synchronous") return ProtocolMode::Synchronous;
  if (s == "async" || s == "asynchronous") return ProtocolMode::Asynchronous;
  throw ScenarioInvalid("unknown protocol mode: " + s);
}

StrategyKind parse_strategy(const std::string& s) {
  if (s == "ours") return StrategyKind::Ours;
  if (s == "mags") return StrategyKind::Mags;
  if (s == "greedy" || s == "frontier") return StrategyKind::FrontierGreedy;
  throw ScenarioInvalid("unknown strategy: " + s);
}

std::string strategy_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::Ours: return "ours";
    case StrategyKind::Mags: return "mags";
    default: return "greedy";
  }
}

Scenario load_scenario(const std::string& path) {
  const SectionMap sections = parse_config(path);
  const Reader r(sections, path);

  Scenario sc;
  sc.map_pgm = r.require("map", "pgm");
  sc.map_meta = r.str("map", "meta", sc.map_pgm.substr(0, sc.map_pgm.rfind('.')) + ".meta");
  // Map paths are relative to the scenario file's directory.
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) {
    const std::string dir = path.substr(0, slash + 1);
    if (!sc.map_pgm.empty() && sc.map_pgm.front() != '/') sc.map_pgm = dir + sc.map_pgm;
    if (!sc.map_meta.empty() && sc.map_meta.front() != '/') sc.map_meta = dir + sc.map_meta;
  }

  sc.mode = parse_mode(r.str("run", "mode", "async"));
  sc.strategy = parse_strategy(r.str("run", "strategy", "ours"));
  sc.tick_limit = r.integer("run", "ticks", 400);
  sc.seed = static_cast<unsigned>(r.integer("run", "seed", 1));
  sc.stop_coverage = r.num("run", "stop_coverage", 100.0);
  if (sc.tick_limit < 0) throw ScenarioInvalid("ticks must be >= 0");

  sc.filter.rad = r.num("filter", "rad", 1.0);
  sc.filter.per_unk = r.num("filter", "per_unk", 60.0);
  sc.filter.min_pts = r.integer("filter", "min_pts", 0);
  sc.filter.max_pts = r.integer("filter", "max_pts", 10);
  sc.filter.rad_step = r.num("filter", "rad_step", 0.25);
  sc.filter.per_unk_step = r.num("filter", "per_unk_step", 10.0);
  sc.filter.max_adapt_iters = r.integer("filter", "max_adapt_iters", 8);
  if (sc.filter.rad <= 0 || sc.filter.per_unk < 0 || sc.filter.per_unk > 100 ||
      sc.filter.min_pts > sc.filter.max_pts || sc.filter.rad_step <= 0 ||
      sc.filter.per_unk_step <= 0 || sc.filter.max_adapt_iters < 1)
    throw ScenarioInvalid("invalid [filter] parameters");

  sc.weights.alpha = r.num("reward", "alpha", 1.0);
  sc.weights.beta = r.num("reward", "beta", 0.5);
  sc.weights.gamma = r.num("reward", "gamma", 0.1);

  sc.planner.inflation = r.num("planner", "inflation", 0.25);
  sc.planner.unknown_cost = r.num("planner", "unknown_cost", 2.0);

  sc.eps_pt = r.num("coordinator", "eps_pt", 0.3);
  sc.goal_skip_wait = r.integer("coordinator", "goal_skip_wait", 3);
  sc.reexpose_ticks = r.integer("coordinator", "reexpose_ticks", 20);
  sc.sync_timeout_ticks = r.integer("coordinator", "sync_timeout", 50);
  sc.evals_per_tick = r.integer("coordinator", "evals_per_tick", 10);
  if (sc.evals_per_tick < 1)
    throw ScenarioInvalid("evals_per_tick must be >= 1");

  sc.sensor.max_range = r.num("sensor", "range", 4.0);
  sc.sensor.num_rays = r.integer("sensor", "rays", 180);
  sc.sensor.field_of_view = r.num("sensor", "fov", 6.283185307179586);
  if (sc.sensor.max_range <= 0 || sc.sensor.num_rays < 1)
    throw ScenarioInvalid("invalid [sensor] parameters");

  sc.speed = r.num("agents", "speed", 0.5);
  sc.goal_tol = r.num("agents", "goal_tol", 0.5 * sc.filter.rad);
  sc.replan_limit = r.integer("agents", "replan_limit", 3);
  sc.loop_closure_radius = r.num("agents", "loop_radius", 1.0);
  sc.loop_closure_weight = r.num("agents", "loop_weight", 5.0);
  sc.spawn_jitter = r.num("agents", "spawn_jitter", 0.0);

  const int count = r.integer("agents", "count", 0);
  for (int i = 0;; ++i) {
    const std::string sec = "agent." + std::to_string(i);
    if (!r.has_section(sec)) break;
    std::istringstream sp(r.require(sec, "spawn"));
    Pose2D pose;
    if (!(sp >> pose.x >> pose.y >> pose.theta))
      throw ScenarioInvalid("bad spawn in [" + sec + "]");
    pose.theta = normalize_angle(pose.theta);
    sc.spawns.push_back(pose);
  }
  if (sc.spawns.empty()) throw ScenarioInvalid("no [agent.N] sections");
  if (count > 0 && count != static_cast<int>(sc.spawns.size()))
    throw ScenarioInvalid("[agents] count does not match agent sections");
  return sc;
}

CoordinatorParams Scenario::coordinator_params() const {
  CoordinatorParams cp;
  cp.mode = mode;
  cp.strategy = strategy;
  cp.filter = filter;
  cp.weights = weights;
  cp.planner = planner;
  cp.eps_pt = eps_pt;
  cp.goal_skip_wait = goal_skip_wait;
  cp.reexpose_ticks = reexpose_ticks;
  cp.sync_timeout_ticks = sync_timeout_ticks;
  return cp;
}

AgentParams Scenario::agent_params(int id) const {
  AgentParams ap;
  ap.id = id;
  ap.spawn = spawns.at(id);
  ap.sensor = sensor;
  ap.speed = speed;
  ap.planner = planner;
  ap.goal_tol = goal_tol;
  ap.replan_limit = replan_limit;
  ap.loop_closure_radius = loop_closure_radius;
  ap.loop_closure_weight = loop_closure_weight;
  return ap;
}

}  // namespace coex
