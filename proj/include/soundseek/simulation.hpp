#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soundseek/config.hpp"
#include "soundseek/exploration.hpp"
#include "soundseek/formation.hpp"
#include "soundseek/supervisor.hpp"
#include "soundseek/vec2.hpp"

namespace soundseek {

/// Kinematic state of one double-integrator agent plus its tracking targets.
struct AgentState {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 hold_point = Vec2::Zero();  // position-hold target while listening
  Reference reference;             // trajectory tracked while moving
  Vec2 virtual_velocity = Vec2::Zero();
  double movement_length = 0.0;    // gamma * ||v_bar|| latched at the last move start
};

/// Semi-implicit Euler: v' = v + u dt, p' = p + v' dt. Throws
/// std::runtime_error on a non-finite acceleration.
AgentState integrate_step(const AgentState& state, const Vec2& acceleration, double dt);

struct SimClock {
  std::int64_t step = 0;
  double dt = 1e-3;
  double time() const { return static_cast<double>(step) * dt; }
};

enum class EventKind { ListenStart, MoveStart, Detection };

const char* to_string(EventKind kind);

/// Mode switch or detection. `agent_id` is one-based; 0 denotes the whole
/// formation in the single-source scenario.
struct Event {
  double time = 0.0;
  int agent_id = 0;
  EventKind kind = EventKind::ListenStart;
  Vec2 position = Vec2::Zero();
  double step_target = std::numeric_limits<double>::quiet_NaN();  // ListenStart: target just met
  double traveled = std::numeric_limits<double>::quiet_NaN();     // ListenStart: distance moved
  double mu_s = std::numeric_limits<double>::quiet_NaN();         // MoveStart, Detection
  double mu_theta = std::numeric_limits<double>::quiet_NaN();     // MoveStart
  int area_id = -1;                                               // Detection
};

struct TrajectorySample {
  double time = 0.0;
  int agent_id = 0;
  Vec2 position = Vec2::Zero();
  Mode mode = Mode::Listening;
  double mu_s = 0.0;
  double mu_theta = 0.0;
  double variance = 0.0;
  double concentration = 0.0;
};

struct RunMetrics {
  ScenarioKind scenario = ScenarioKind::Single;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  double duration = 0.0;

  // Single source.
  std::optional<double> convergence_time;                // t_s
  std::optional<double> convergence_time_excluding_settle;
  double settle_time_total = 0.0;                        // s, summed over all listening phases
  double final_centroid_distance = std::numeric_limits<double>::quiet_NaN();
  double max_bearing_error = 0.0;                        // after the transient window
  std::vector<std::pair<double, double>> centroid_distance;  // (time, distance), decimated

  // Multi source.
  int detection_count = 0;
  std::vector<Vec2> detection_points;
  std::vector<ExploredArea> explored_areas;

  std::vector<SoundSource> sources;
  std::vector<Vec2> final_positions;
  std::vector<Event> events;
  std::vector<TrajectorySample> trajectory;  // only when emit_trajectories is on
};

/// Per-step read-only view handed to an observer after the supervisor logic
/// of the step and before integration.
struct StepView {
  std::int64_t step = 0;
  double time = 0.0;
  std::span<const AgentState> agents;
  std::span<const SupervisorState> supervisors;  // one per control unit
};

struct RunOptions {
  std::function<void(const StepView&)> observer;
};

/// Formation source seeking. `config.scenario` must be Single.
RunMetrics run_single_source(const ScenarioConfig& config, std::uint64_t seed,
                             const RunOptions& options = {});

/// Independent exploring agents with a shared explored-area registry.
/// `config.scenario` must be Multi.
RunMetrics run_multi_source(const ScenarioConfig& config, std::uint64_t seed,
                            const RunOptions& options = {});

/// Dispatches on `config.scenario`.
RunMetrics run_scenario(const ScenarioConfig& config, std::uint64_t seed,
                        const RunOptions& options = {});

/// Random targets uniform in the spawn square, drawn from `rng`.
std::vector<SoundSource> spawn_sources(const ScenarioConfig& config, Rng& rng);

}  // namespace soundseek
