#include "soundseek/simulation.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace soundseek {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ListenStart:
      return "listen_start";
    case EventKind::MoveStart:
      return "move_start";
    case EventKind::Detection:
      return "detection";
  }
  return "unknown";
}

AgentState integrate_step(const AgentState& state, const Vec2& acceleration, double dt) {
  if (!is_finite(acceleration)) {
    throw std::runtime_error("non-finite control input; aborting run");
  }
  AgentState next = state;
  next.velocity = state.velocity + acceleration * dt;
  next.position = state.position + next.velocity * dt;
  return next;
}

std::vector<SoundSource> spawn_sources(const ScenarioConfig& config, Rng& rng) {
  std::uniform_real_distribution<double> coord(-0.5 * config.spawn_side, 0.5 * config.spawn_side);
  std::vector<SoundSource> out;
  for (int k = 0; k < config.targets; ++k) {
    const double x = coord(rng);
    const double y = coord(rng);
    out.push_back({Vec2(x, y), config.source_power});
  }
  return out;
}

namespace {

std::int64_t step_count(const ScenarioConfig& config) {
  return static_cast<std::int64_t>(std::llround(config.duration / config.dt));
}

Vec2 mean_position(std::span<const AgentState> agents) {
  Vec2 c = Vec2::Zero();
  for (const auto& a : agents) c += a.position;
  return c / static_cast<double>(agents.size());
}

// The hold energy |v|^2 + kp |p - hold|^2 never increases under PD hold, so
// once it is below settle_speed^2 the speed stays below settle_speed.
bool settled(const AgentState& a, const GainSet& gains, double settle_speed) {
  const double energy =
      a.velocity.squaredNorm() + gains.leader_kp * (a.position - a.hold_point).squaredNorm();
  return energy < settle_speed * settle_speed;
}

Vec2 hold_control(const AgentState& a, const GainSet& gains) {
  return leader_control(a.position, a.velocity, {a.hold_point, Vec2::Zero()}, gains.leader_kp,
                        gains.leader_kd);
}

TrajectorySample sample_of(double time, int id, const AgentState& a, const SupervisorState& s) {
  return {time,
          id,
          a.position,
          s.mode,
          s.step_estimate.mean,
          s.doa_estimate.mean,
          s.step_estimate.uncertainty(),
          s.doa_estimate.concentration};
}

}  // namespace

RunMetrics run_single_source(const ScenarioConfig& config, std::uint64_t seed,
                             const RunOptions& options) {
  if (config.scenario != ScenarioKind::Single) {
    throw std::invalid_argument("run_single_source needs a single-source config");
  }
  config.validate();
  Rng rng(seed);

  std::vector<SoundSource> sources;
  for (const auto& p : config.sources) sources.push_back({p, config.source_power});
  const AcousticWorld world(sources);
  const Vec2 target = sources.front().position;
  const FormationGraph graph(config.agent_positions, config.formation_edges, config.leaders);
  const GainSet& gains = config.gains;
  const double dt = config.dt;
  constexpr int kAgents = 4;

  std::vector<AgentState> agents(kAgents);
  for (int i = 0; i < kAgents; ++i) {
    agents[i].position = config.agent_positions[i];
    agents[i].hold_point = agents[i].position;
    agents[i].reference.position = agents[i].position;
  }
  std::vector<SupervisorState> unit{make_supervisor(mean_position(agents), config.noise)};
  SupervisorState& sup = unit.front();

  RunMetrics m;
  m.scenario = ScenarioKind::Single;
  m.seed = seed;
  m.sources = sources;
  m.events.push_back({.time = 0.0, .agent_id = 0, .kind = EventKind::ListenStart,
                      .position = sup.measurement_anchor});

  const std::int64_t steps = step_count(config);
  const auto transient_steps = static_cast<std::int64_t>(std::llround(config.bearing_transient / dt));
  double listen_started = 0.0;
  std::optional<std::int64_t> candidate;
  double candidate_settle = 0.0;

  std::array<double, kAgents> intensities{};
  std::array<Vec2, kAgents> positions;
  std::array<Vec2, kAgents> velocities;
  std::array<Vec2, kAgents> controls;

  for (std::int64_t step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    for (int i = 0; i < kAgents; ++i) {
      positions[i] = agents[i].position;
      velocities[i] = agents[i].velocity;
    }
    const Vec2 centroid = mean_position(agents);

    if (sup.mode == Mode::Listening) {
      if (sup.settling) {
        bool still = true;
        for (const auto& a : agents) still = still && settled(a, gains, config.thresholds.settle_speed);
        if (still) {
          sup.settling = false;
          m.settle_time_total += t - listen_started;
        }
      }
      if (!sup.settling) {
        for (int i = 0; i < kAgents; ++i) {
          intensities[i] = omni_intensity(world, {positions[i], config.array_radius});
        }
        // With no usable gradient the current estimate is kept as the truth.
        const double doa = formation_doa(intensities, positions, config.doa_edges)
                               .value_or(sup.doa_estimate.mean);
        const double step_len = formation_step(intensities, gains.step_scale);
        const double s_meas = sample_step(rng, step_len, config.noise.step_variance);
        const double th_meas = sample_doa(rng, doa, config.noise.doa_concentration);
        sup = listening_step(sup, s_meas, th_meas);
        if (should_start_moving(sup, config.thresholds)) {
          sup = transition(sup, centroid);
          for (auto& a : agents) {
            a.reference = {a.position, gains.cruise_speed * unit_from_angle(sup.latched_heading)};
          }
          m.events.push_back({.time = t, .agent_id = 0, .kind = EventKind::MoveStart,
                              .position = centroid, .mu_s = sup.step_estimate.mean,
                              .mu_theta = sup.latched_heading});
        }
      }
    } else if (should_start_listening(sup, centroid, sup.latched_step)) {
      m.events.push_back({.time = t, .agent_id = 0, .kind = EventKind::ListenStart,
                          .position = centroid, .step_target = sup.latched_step,
                          .traveled = (centroid - sup.measurement_anchor).norm()});
      sup = transition(sup, centroid);
      listen_started = t;
      for (auto& a : agents) a.hold_point = a.position;
    }

    const double distance = (centroid - target).norm();
    if (distance > config.convergence_radius) {
      candidate.reset();
    } else if (!candidate && sup.mode == Mode::Listening) {
      candidate = step;
      candidate_settle = m.settle_time_total;
    }
    if (step >= transient_steps) {
      m.max_bearing_error = std::max(m.max_bearing_error, max_bearing_error(positions, graph));
    }
    if (step % config.trajectory_decimation == 0) {
      m.centroid_distance.emplace_back(t, distance);
      if (config.emit_trajectories) {
        for (int i = 0; i < kAgents; ++i) m.trajectory.push_back(sample_of(t, i + 1, agents[i], sup));
      }
    }
    if (options.observer) options.observer({step, t, agents, unit});

    for (int i = 0; i < kAgents; ++i) {
      auto& a = agents[i];
      if (sup.mode == Mode::Listening) {
        controls[i] = hold_control(a, gains);
      } else if (graph.is_leader(i)) {
        controls[i] = leader_control(a.position, a.velocity, a.reference, gains.leader_kp,
                                     gains.leader_kd);
        a.reference = leader_reference(sup.latched_heading, gains.cruise_speed, dt, a.reference);
      } else {
        controls[i] = follower_control(i, positions, velocities, graph, gains.follower_kp,
                                       gains.follower_kd);
      }
    }
    for (int i = 0; i < kAgents; ++i) agents[i] = integrate_step(agents[i], controls[i], dt);
  }

  m.steps = steps;
  m.duration = static_cast<double>(steps) * dt;
  if (candidate) {
    m.convergence_time = static_cast<double>(*candidate) * dt;
    m.convergence_time_excluding_settle = *m.convergence_time - candidate_settle;
  }
  m.final_centroid_distance = (mean_position(agents) - target).norm();
  for (const auto& a : agents) m.final_positions.push_back(a.position);
  return m;
}

RunMetrics run_multi_source(const ScenarioConfig& config, std::uint64_t seed,
                            const RunOptions& options) {
  if (config.scenario != ScenarioKind::Multi) {
    throw std::invalid_argument("run_multi_source needs a multi-source config");
  }
  config.validate();
  Rng rng(seed);

  std::vector<SoundSource> sources;
  if (config.sources.empty()) {
    sources = spawn_sources(config, rng);
  } else {
    for (const auto& p : config.sources) sources.push_back({p, config.source_power});
  }
  const AcousticWorld world(sources);
  const GainSet& gains = config.gains;
  const ExplorationParams& params = config.exploration;
  const double dt = config.dt;
  const auto n = static_cast<int>(config.agent_positions.size());

  std::vector<AgentState> agents(n);
  std::vector<SupervisorState> sups;
  std::vector<double> listen_started(n, 0.0);
  RunMetrics m;
  m.scenario = ScenarioKind::Multi;
  m.seed = seed;
  m.sources = sources;
  for (int i = 0; i < n; ++i) {
    agents[i].position = config.agent_positions[i];
    agents[i].hold_point = agents[i].position;
    agents[i].reference.position = agents[i].position;
    sups.push_back(make_supervisor(agents[i].position, config.noise));
    m.events.push_back({.time = 0.0, .agent_id = i + 1, .kind = EventKind::ListenStart,
                        .position = agents[i].position});
  }
  ExploredAreaRegistry registry;
  std::vector<int> switching;
  std::vector<Vec2> controls(n);

  const std::int64_t steps = step_count(config);
  for (std::int64_t step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    switching.clear();
    for (int i = 0; i < n; ++i) {
      auto& a = agents[i];
      auto& sup = sups[i];
      if (sup.mode == Mode::Listening) {
        if (sup.settling && settled(a, gains, config.thresholds.settle_speed)) {
          sup.settling = false;
          m.settle_time_total += t - listen_started[i];
        }
        if (sup.settling) continue;
        const MicrophoneArray array{a.position, config.array_radius};
        const auto channels = array_intensities(world, array);
        const double doa = array_doa(channels, microphone_positions(array))
                               .value_or(sup.doa_estimate.mean);
        const double step_len = array_step(channels, params.beta);
        const double s_meas = sample_step(rng, step_len, config.noise.step_variance);
        const double th_meas = sample_doa(rng, doa, config.noise.doa_concentration);
        sup = listening_step(sup, s_meas, th_meas);
        if (should_start_moving(sup, config.thresholds)) switching.push_back(i);
      } else if (should_start_listening(sup, a.position, a.movement_length)) {
        m.events.push_back({.time = t, .agent_id = i + 1, .kind = EventKind::ListenStart,
                            .position = a.position, .step_target = a.movement_length,
                            .traveled = (a.position - sup.measurement_anchor).norm()});
        sup = transition(sup, a.position);
        listen_started[i] = t;
        a.hold_point = a.position;
      }
    }

    // Registry writes land at step end, in agent order; the velocity updates
    // below all see the same post-write registry.
    for (int i : switching) {
      const double mu_s = sups[i].step_estimate.mean;
      if (mu_s <= params.detection_threshold) {
        const auto area = registry.register_detection(agents[i].position, params);
        m.detection_points.push_back(agents[i].position);
        m.events.push_back({.time = t, .agent_id = i + 1, .kind = EventKind::Detection,
                            .position = agents[i].position, .mu_s = mu_s,
                            .area_id = static_cast<int>(area)});
      }
    }
    for (int i : switching) {
      auto& a = agents[i];
      auto& sup = sups[i];
      a.virtual_velocity = update_virtual_velocity(a.virtual_velocity, a.position, registry,
                                                   sup.step_estimate.mean, sup.doa_estimate.mean,
                                                   params, rng);
      a.movement_length = params.gamma * a.virtual_velocity.norm();
      sup = transition(sup, a.position);
      a.reference = exploration_reference(a.virtual_velocity, gains.cruise_speed, 0.0,
                                          {a.position, Vec2::Zero()});
      m.events.push_back({.time = t, .agent_id = i + 1, .kind = EventKind::MoveStart,
                          .position = a.position, .mu_s = sup.step_estimate.mean,
                          .mu_theta = sup.latched_heading});
    }

    if (config.emit_trajectories && step % config.trajectory_decimation == 0) {
      for (int i = 0; i < n; ++i) m.trajectory.push_back(sample_of(t, i + 1, agents[i], sups[i]));
    }
    if (options.observer) options.observer({step, t, agents, sups});

    for (int i = 0; i < n; ++i) {
      auto& a = agents[i];
      if (sups[i].mode == Mode::Listening) {
        controls[i] = hold_control(a, gains);
      } else {
        controls[i] = leader_control(a.position, a.velocity, a.reference, gains.leader_kp,
                                     gains.leader_kd);
        a.reference = exploration_reference(a.virtual_velocity, gains.cruise_speed, dt, a.reference);
      }
    }
    for (int i = 0; i < n; ++i) agents[i] = integrate_step(agents[i], controls[i], dt);
  }

  m.steps = steps;
  m.duration = static_cast<double>(steps) * dt;
  m.explored_areas = registry.areas();
  m.detection_count = score_detections(m.detection_points, sources, params.scoring_radius);
  for (const auto& a : agents) m.final_positions.push_back(a.position);
  return m;
}

RunMetrics run_scenario(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& options) {
  return config.scenario == ScenarioKind::Single ? run_single_source(config, seed, options)
                                                 : run_multi_source(config, seed, options);
}

}  // namespace soundseek
