#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "soundseek/acoustics.hpp"
#include "soundseek/estimation.hpp"
#include "soundseek/exploration.hpp"
#include "soundseek/formation.hpp"
#include "soundseek/supervisor.hpp"

namespace soundseek {

/// Config problem; `key()` names the offending key when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class ScenarioKind { Single, Multi };

const char* to_string(ScenarioKind kind);

/// Every parameter of a run. Defaults depend on the scenario kind; see
/// `ScenarioConfig::defaults`.
struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::Single;
  std::uint64_t seed = 1;
  int runs = 1;
  double duration = 20000.0;  // s
  double dt = 1e-3;           // s

  double source_power = 1e8;
  std::vector<Vec2> sources;  // explicit placement; empty means random spawn
  int targets = 3;            // random spawn count (multi)
  double spawn_side = 50.0;   // random spawn square side, centered at the origin

  std::vector<Vec2> agent_positions;
  double array_radius = 0.1;

  NoiseModel noise;
  SwitchThresholds thresholds;
  GainSet gains;

  // Single-source formation (zero-based indices).
  std::vector<int> leaders;
  std::vector<Edge> formation_edges;
  std::vector<Edge> doa_edges;
  double convergence_radius = 0.05;  // m
  double bearing_transient = 5.0;    // s

  ExplorationParams exploration;

  long trajectory_decimation = 100;
  bool emit_trajectories = false;

  /// Defaults for `kind`, matching the published experiment settings.
  static ScenarioConfig defaults(ScenarioKind kind);

  /// Throws ConfigError naming the key for any out-of-domain value.
  void validate() const;
};

/// Reads the flat YAML key-value schema; unknown keys are rejected.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& text);

/// Serializes every effective key; `parse_config(to_config_text(c))`
/// reproduces `c` exactly.
std::string to_config_text(const ScenarioConfig& config);

}  // namespace soundseek
