#include "soundseek/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <yaml-cpp/yaml.h>

namespace soundseek {

const char* to_string(ScenarioKind kind) { return kind == ScenarioKind::Single ? "single" : "multi"; }

namespace {

ScenarioKind parse_kind(const std::string& s) {
  if (s == "single") return ScenarioKind::Single;
  if (s == "multi") return ScenarioKind::Multi;
  throw ConfigError("scenario", "expected 'single' or 'multi', got '" + s + "'");
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(key, "expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, "cannot convert '" + node.Scalar() + "'");
  }
}

Vec2 point(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() != 2) throw ConfigError(key, "expected [x, y]");
  return {scalar<double>(node[0], key), scalar<double>(node[1], key)};
}

std::vector<Vec2> points(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError(key, "expected a list of [x, y] pairs");
  std::vector<Vec2> out;
  for (const auto& item : node) out.push_back(point(item, key));
  return out;
}

// Agent indices are one-based in config files.
int agent_index(const YAML::Node& node, const std::string& key) {
  const int v = scalar<int>(node, key);
  if (v < 1) throw ConfigError(key, "agent indices are one-based");
  return v - 1;
}

std::vector<int> indices(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError(key, "expected a list of agent indices");
  std::vector<int> out;
  for (const auto& item : node) out.push_back(agent_index(item, key));
  return out;
}

std::vector<Edge> edges(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError(key, "expected a list of [i, j] agent pairs");
  std::vector<Edge> out;
  for (const auto& item : node) {
    if (!item.IsSequence() || item.size() != 2) throw ConfigError(key, "expected [i, j]");
    out.push_back({agent_index(item[0], key), agent_index(item[1], key)});
  }
  return out;
}

bool on_off(const YAML::Node& node, const std::string& key) {
  const auto s = scalar<std::string>(node, key);
  if (s == "on" || s == "true" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "no") return false;
  throw ConfigError(key, "expected on or off");
}

using Setter = std::function<void(ScenarioConfig&, const YAML::Node&, const std::string&)>;

template <typename T>
Setter number(T ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, const YAML::Node& n, const std::string& k) {
    c.*field = scalar<T>(n, k);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", number(&ScenarioConfig::seed)},
      {"runs", number(&ScenarioConfig::runs)},
      {"duration", number(&ScenarioConfig::duration)},
      {"dt", number(&ScenarioConfig::dt)},
      {"source_power", number(&ScenarioConfig::source_power)},
      {"sources", [](auto& c, auto& n, auto& k) { c.sources = points(n, k); }},
      {"targets", number(&ScenarioConfig::targets)},
      {"spawn_side", number(&ScenarioConfig::spawn_side)},
      {"agent_positions", [](auto& c, auto& n, auto& k) { c.agent_positions = points(n, k); }},
      {"array_radius", number(&ScenarioConfig::array_radius)},
      {"step_variance", [](auto& c, auto& n, auto& k) { c.noise.step_variance = scalar<double>(n, k); }},
      {"doa_concentration",
       [](auto& c, auto& n, auto& k) { c.noise.doa_concentration = scalar<double>(n, k); }},
      {"p_thresh", [](auto& c, auto& n, auto& k) { c.thresholds.p_thresh = scalar<double>(n, k); }},
      {"k_thresh", [](auto& c, auto& n, auto& k) { c.thresholds.k_inv_thresh = scalar<double>(n, k); }},
      {"settle_speed",
       [](auto& c, auto& n, auto& k) { c.thresholds.settle_speed = scalar<double>(n, k); }},
      {"leader_kp", [](auto& c, auto& n, auto& k) { c.gains.leader_kp = scalar<double>(n, k); }},
      {"leader_kd", [](auto& c, auto& n, auto& k) { c.gains.leader_kd = scalar<double>(n, k); }},
      {"follower_kp", [](auto& c, auto& n, auto& k) { c.gains.follower_kp = scalar<double>(n, k); }},
      {"follower_kd", [](auto& c, auto& n, auto& k) { c.gains.follower_kd = scalar<double>(n, k); }},
      {"cruise_speed", [](auto& c, auto& n, auto& k) { c.gains.cruise_speed = scalar<double>(n, k); }},
      {"alpha", [](auto& c, auto& n, auto& k) { c.gains.step_scale = scalar<double>(n, k); }},
      {"leaders", [](auto& c, auto& n, auto& k) { c.leaders = indices(n, k); }},
      {"formation_edges", [](auto& c, auto& n, auto& k) { c.formation_edges = edges(n, k); }},
      {"doa_edges", [](auto& c, auto& n, auto& k) { c.doa_edges = edges(n, k); }},
      {"convergence_radius", number(&ScenarioConfig::convergence_radius)},
      {"bearing_transient", number(&ScenarioConfig::bearing_transient)},
      {"beta", [](auto& c, auto& n, auto& k) { c.exploration.beta = scalar<double>(n, k); }},
      {"gamma", [](auto& c, auto& n, auto& k) { c.exploration.gamma = scalar<double>(n, k); }},
      {"k_v", [](auto& c, auto& n, auto& k) { c.exploration.decay = scalar<double>(n, k); }},
      {"k_r_escape", [](auto& c, auto& n, auto& k) { c.exploration.escape_gain = scalar<double>(n, k); }},
      {"k_r_growth", [](auto& c, auto& n, auto& k) { c.exploration.growth = scalar<double>(n, k); }},
      {"r0", [](auto& c, auto& n, auto& k) { c.exploration.initial_radius = scalar<double>(n, k); }},
      {"mu_s_thresh",
       [](auto& c, auto& n, auto& k) { c.exploration.detection_threshold = scalar<double>(n, k); }},
      {"r_tt", [](auto& c, auto& n, auto& k) { c.exploration.scoring_radius = scalar<double>(n, k); }},
      {"trajectory_decimation", number(&ScenarioConfig::trajectory_decimation)},
      {"emit_trajectories", [](auto& c, auto& n, auto& k) { c.emit_trajectories = on_off(n, k); }},
  };
  return table;
}

// Rethrows a library validation failure under the config key it concerns.
template <typename F>
void check(const std::string& key, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind) {
  ScenarioConfig c;
  c.scenario = kind;
  if (kind == ScenarioKind::Single) {
    c.duration = 20000.0;
    c.sources = {Vec2(30.0, 40.0)};
    c.agent_positions = {Vec2(1, 1), Vec2(1, -1), Vec2(-1, -1), Vec2(-1, 1)};
    c.noise = {0.1, 1.0};
    c.leaders = {0, 2};
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) c.formation_edges.push_back({i, j});
    }
    c.doa_edges = {{1, 0}, {3, 0}};
  } else {
    c.duration = 1000.0;
    c.targets = 3;
    c.agent_positions = {Vec2(30, 30), Vec2(30, -30), Vec2(-30, -30), Vec2(-30, 30)};
    c.noise = {0.01, 100.0};
  }
  return c;
}

void ScenarioConfig::validate() const {
  require(runs >= 1, "runs", "must be >= 1");
  require(positive(duration), "duration", "must be positive");
  require(positive(dt), "dt", "must be positive");
  require(positive(source_power), "source_power", "must be positive");
  require(positive(array_radius), "array_radius", "must be positive");
  require(positive(spawn_side), "spawn_side", "must be positive");
  require(trajectory_decimation >= 1, "trajectory_decimation", "must be >= 1");
  for (const auto& s : sources) require(is_finite(s), "sources", "positions must be finite");
  for (const auto& p : agent_positions) {
    require(is_finite(p), "agent_positions", "positions must be finite");
  }
  check("step_variance", [&] {
    if (!positive(noise.step_variance)) throw std::invalid_argument("must be positive");
  });
  check("doa_concentration", [&] {
    if (!positive(noise.doa_concentration)) throw std::invalid_argument("must be positive");
  });
  require(positive(thresholds.p_thresh), "p_thresh", "must be positive");
  require(positive(thresholds.k_inv_thresh), "k_thresh", "must be positive");
  require(positive(thresholds.settle_speed), "settle_speed", "must be positive");
  require(positive(gains.leader_kp), "leader_kp", "must be positive");
  require(positive(gains.leader_kd), "leader_kd", "must be positive");
  require(positive(gains.follower_kp), "follower_kp", "must be positive");
  require(positive(gains.follower_kd), "follower_kd", "must be positive");
  require(positive(gains.cruise_speed), "cruise_speed", "must be positive");
  require(positive(gains.step_scale), "alpha", "must be positive");

  if (scenario == ScenarioKind::Single) {
    require(agent_positions.size() == 4, "agent_positions", "the formation has exactly four agents");
    require(sources.size() == 1, "sources", "the single-source scenario needs exactly one source");
    require(positive(convergence_radius), "convergence_radius", "must be positive");
    require(bearing_transient >= 0.0, "bearing_transient", "must be >= 0");
    require(leaders.size() >= 2, "leaders", "at least two leaders are required");
    for (int l : leaders) require(l < 4, "leaders", "leader index out of range");
    check("formation_edges", [&] { FormationGraph(agent_positions, formation_edges, leaders); });
    for (const auto& e : doa_edges) {
      require(e.from < 4 && e.to < 4 && e.from != e.to, "doa_edges", "invalid agent pair");
    }
    check("doa_edges", [&] {
      const std::vector<double> flat(4, 1.0);
      formation_doa(flat, agent_positions, doa_edges);
    });
  } else {
    require(!agent_positions.empty(), "agent_positions", "at least one agent is required");
    require(!sources.empty() || targets >= 1, "targets", "must be >= 1 when sources are not given");
    const auto& x = exploration;
    require(positive(x.beta), "beta", "must be positive");
    require(positive(x.gamma), "gamma", "must be positive");
    require(x.decay > 0.0 && x.decay < 1.0, "k_v", "must satisfy 0 < k_v < 1");
    require(x.escape_gain >= 1.0 && std::isfinite(x.escape_gain), "k_r_escape", "must be >= 1");
    require(x.growth > 1.0 && std::isfinite(x.growth), "k_r_growth", "must be > 1");
    require(positive(x.initial_radius), "r0", "must be positive");
    require(positive(x.detection_threshold), "mu_s_thresh", "must be positive");
    require(positive(x.scoring_radius), "r_tt", "must be positive");
  }
}

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("", "parse error: expected a key-value mapping");
  if (!root["scenario"]) throw ConfigError("scenario", "missing required key");
  ScenarioConfig config =
      ScenarioConfig::defaults(parse_kind(scalar<std::string>(root["scenario"], "scenario")));
  for (const auto& item : root) {
    const auto key = item.first.as<std::string>();
    if (key == "scenario") continue;
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key");
    it->second(config, item.second, key);
  }
  config.validate();
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

namespace {

std::string fmt_points(const std::vector<Vec2>& pts) {
  std::vector<std::string> items;
  for (const auto& p : pts) items.push_back(fmt::format("[{}, {}]", p.x(), p.y()));
  return fmt::format("[{}]", fmt::join(items, ", "));
}

std::string fmt_edges(const std::vector<Edge>& es) {
  std::vector<std::string> items;
  for (const auto& e : es) items.push_back(fmt::format("[{}, {}]", e.from + 1, e.to + 1));
  return fmt::format("[{}]", fmt::join(items, ", "));
}

}  // namespace

std::string to_config_text(const ScenarioConfig& c) {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{}: {}\n", key, value);
  };
  line("scenario", to_string(c.scenario));
  line("seed", c.seed);
  line("runs", c.runs);
  line("duration", c.duration);
  line("dt", c.dt);
  line("source_power", c.source_power);
  line("sources", fmt_points(c.sources));
  line("targets", c.targets);
  line("spawn_side", c.spawn_side);
  line("agent_positions", fmt_points(c.agent_positions));
  line("array_radius", c.array_radius);
  line("step_variance", c.noise.step_variance);
  line("doa_concentration", c.noise.doa_concentration);
  line("p_thresh", c.thresholds.p_thresh);
  line("k_thresh", c.thresholds.k_inv_thresh);
  line("settle_speed", c.thresholds.settle_speed);
  line("leader_kp", c.gains.leader_kp);
  line("leader_kd", c.gains.leader_kd);
  line("follower_kp", c.gains.follower_kp);
  line("follower_kd", c.gains.follower_kd);
  line("cruise_speed", c.gains.cruise_speed);
  line("alpha", c.gains.step_scale);
  std::vector<int> one_based;
  for (int l : c.leaders) one_based.push_back(l + 1);
  line("leaders", fmt::format("[{}]", fmt::join(one_based, ", ")));
  line("formation_edges", fmt_edges(c.formation_edges));
  line("doa_edges", fmt_edges(c.doa_edges));
  line("convergence_radius", c.convergence_radius);
  line("bearing_transient", c.bearing_transient);
  line("beta", c.exploration.beta);
  line("gamma", c.exploration.gamma);
  line("k_v", c.exploration.decay);
  line("k_r_escape", c.exploration.escape_gain);
  line("k_r_growth", c.exploration.growth);
  line("r0", c.exploration.initial_radius);
  line("mu_s_thresh", c.exploration.detection_threshold);
  line("r_tt", c.exploration.scoring_radius);
  line("trajectory_decimation", c.trajectory_decimation);
  line("emit_trajectories", c.emit_trajectories ? "on" : "off");
  return out;
}

}  // namespace soundseek
