#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "soundseek/config.hpp"
#include "soundseek/simulation.hpp"

using namespace soundseek;
using doctest::Approx;

namespace {

ScenarioConfig quiet_single(double duration) {
  auto c = ScenarioConfig::defaults(ScenarioKind::Single);
  c.noise = {1e-8, 1e8};
  c.duration = duration;
  return c;
}

bool same_events(const std::vector<Event>& a, const std::vector<Event>& b) {
  if (a.size() != b.size()) return false;
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (!(x.time == y.time && x.agent_id == y.agent_id && x.kind == y.kind &&
          x.position == y.position && same(x.step_target, y.step_target) &&
          same(x.traveled, y.traveled) && same(x.mu_s, y.mu_s) && same(x.mu_theta, y.mu_theta) &&
          x.area_id == y.area_id)) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("free motion") {
  AgentState s;
  s.velocity = {1.0, 0.0};
  const auto next = integrate_step(s, {0.0, 0.0}, 1e-3);
  CHECK(next.position == Vec2(1e-3, 0.0));
  CHECK(next.velocity == Vec2(1.0, 0.0));
}

TEST_CASE("constant acceleration from rest") {
  AgentState s;
  double oracle = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    s = integrate_step(s, {1.0, 0.0}, 1e-3);
    oracle += k * 1e-3 * 1e-3;
  }
  CHECK(s.velocity.x() == Approx(1.0).epsilon(1e-12));
  CHECK(s.position.x() == Approx(oracle).epsilon(1e-12));
  CHECK(s.position.x() == Approx(0.5005).epsilon(1e-12));
}

TEST_CASE("non-finite control aborts") {
  CHECK_THROWS_AS(integrate_step({}, {std::nan(""), 0.0}, 1e-3), std::runtime_error);
  CHECK_THROWS_AS(integrate_step({}, {0.0, INFINITY}, 1e-3), std::runtime_error);
}

TEST_CASE("pd regulation energy does not grow") {
  const GainSet g;
  AgentState s;
  s.position = {0.4, -0.3};
  s.velocity = {-0.1, 0.2};
  const Reference ref{{0.0, 0.0}, {0.0, 0.0}};
  auto energy = [&](const AgentState& a) {
    return 0.5 * a.velocity.squaredNorm() + 0.5 * g.leader_kp * (a.position - ref.position).squaredNorm();
  };
  double prev = energy(s);
  for (int k = 0; k < 20000; ++k) {
    s = integrate_step(s, leader_control(s.position, s.velocity, ref, g.leader_kp, g.leader_kd), 1e-3);
    const double e = energy(s);
    CHECK(e <= prev * (1.0 + 1e-3) + 1e-300);
    prev = e;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("clock time is exact") {
  SimClock c{123456789, 1e-3};
  CHECK(c.time() == 123456789.0 * 1e-3);
}

TEST_CASE("noiseless single source run converges") {
  const auto cfg = quiet_single(500.0);
  const auto m = run_single_source(cfg, 1);
  REQUIRE(m.convergence_time.has_value());
  CHECK(*m.convergence_time < 500.0);
  CHECK(m.final_centroid_distance <= 0.05);
  CHECK(m.max_bearing_error < 0.05);

  // Step lengths shrink as the formation closes in.
  std::vector<double> traveled;
  for (const auto& e : m.events) {
    if (e.kind == EventKind::ListenStart && e.time > 0.0 && e.time <= *m.convergence_time) {
      traveled.push_back(e.traveled);
    }
  }
  REQUIRE(traveled.size() >= 3);
  for (std::size_t i = 1; i < traveled.size(); ++i) CHECK(traveled[i] <= traveled[i - 1]);
  CHECK(traveled.front() == Approx(35.19).epsilon(1e-3));
}

TEST_CASE("listening agents stay still after settling") {
  auto cfg = ScenarioConfig::defaults(ScenarioKind::Single);
  cfg.duration = 300.0;
  const double limit = cfg.thresholds.settle_speed;
  long checked = 0;
  RunOptions opt;
  opt.observer = [&](const StepView& v) {
    const auto& s = v.supervisors.front();
    if (s.mode == Mode::Listening && !s.settling) {
      for (const auto& a : v.agents) {
        CHECK(a.velocity.norm() < limit);
        ++checked;
      }
    }
  };
  run_single_source(cfg, 3, opt);
  CHECK(checked > 0);
}

TEST_CASE("multi source agents hold until their first move") {
  auto cfg = ScenarioConfig::defaults(ScenarioKind::Multi);
  cfg.duration = 60.0;
  const auto start = cfg.agent_positions;
  std::vector<bool> moved(start.size(), false);
  long held = 0;
  RunOptions opt;
  opt.observer = [&](const StepView& v) {
    for (std::size_t i = 0; i < v.agents.size(); ++i) {
      if (v.supervisors[i].mode == Mode::Moving) moved[i] = true;
      if (!moved[i]) {
        CHECK((v.agents[i].position - start[i]).norm() <= 1e-9);
        ++held;
      }
    }
  };
  run_multi_source(cfg, 2, opt);
  CHECK(held > 0);
}

TEST_CASE("lone agent finds a nearby source") {
  auto cfg = ScenarioConfig::defaults(ScenarioKind::Multi);
  cfg.noise = {1e-8, 1e8};
  cfg.duration = 300.0;
  cfg.sources = {{0.0, 0.0}};
  cfg.agent_positions = {{10.0, 0.0}};
  const auto m = run_multi_source(cfg, 1);
  CHECK(m.detection_count == 1);
  bool found = false;
  for (const auto& e : m.events) found = found || e.kind == EventKind::Detection;
  CHECK(found);
}

TEST_CASE("runs replay bit for bit") {
  auto single = ScenarioConfig::defaults(ScenarioKind::Single);
  single.duration = 200.0;
  const auto a = run_single_source(single, 42);
  const auto b = run_single_source(single, 42);
  CHECK(same_events(a.events, b.events));
  CHECK(a.final_positions == b.final_positions);

  auto multi = ScenarioConfig::defaults(ScenarioKind::Multi);
  multi.duration = 200.0;
  const auto c = run_multi_source(multi, 42);
  const auto d = run_multi_source(multi, 42);
  CHECK(same_events(c.events, d.events));
  CHECK(c.detection_points == d.detection_points);
  CHECK(c.final_positions == d.final_positions);
  const auto e = run_multi_source(multi, 43);
  CHECK_FALSE(same_events(c.events, e.events));
}

TEST_CASE("trajectory decimation") {
  auto cfg = ScenarioConfig::defaults(ScenarioKind::Single);
  cfg.duration = 2.0;
  cfg.emit_trajectories = true;
  cfg.trajectory_decimation = 100;
  const auto m = run_single_source(cfg, 1);
  CHECK(m.trajectory.size() == 20 * 4);
  CHECK(m.centroid_distance.size() == 20);
  cfg.emit_trajectories = false;
  CHECK(run_single_source(cfg, 1).trajectory.empty());
}

TEST_CASE("scenario dispatch and mismatch") {
  auto single = ScenarioConfig::defaults(ScenarioKind::Single);
  single.duration = 1.0;
  auto multi = ScenarioConfig::defaults(ScenarioKind::Multi);
  multi.duration = 1.0;
  CHECK_THROWS_AS(run_single_source(multi, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_multi_source(single, 1), std::invalid_argument);
  CHECK(run_scenario(single, 1).scenario == ScenarioKind::Single);
  CHECK(run_scenario(multi, 1).scenario == ScenarioKind::Multi);
}

TEST_CASE("spawned sources lie in the square") {
  auto cfg = ScenarioConfig::defaults(ScenarioKind::Multi);
  cfg.targets = 500;
  Rng rng(6);
  const auto sources = spawn_sources(cfg, rng);
  CHECK(sources.size() == 500);
  for (const auto& s : sources) {
    CHECK(std::abs(s.position.x()) <= 25.0);
    CHECK(std::abs(s.position.y()) <= 25.0);
    CHECK(s.power == cfg.source_power);
  }
}
