#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "soundseek/config.hpp"

using namespace soundseek;
using doctest::Approx;

namespace {

std::string error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("minimal single config gets the published defaults") {
  const auto c = parse_config("scenario: single\n");
  CHECK(c.scenario == ScenarioKind::Single);
  CHECK(c.gains.cruise_speed == 0.2);
  CHECK(c.gains.leader_kp == 10.0);
  CHECK(c.gains.leader_kd == 10.0);
  CHECK(c.gains.follower_kp == 10.0);
  CHECK(c.gains.follower_kd == 10.0);
  CHECK(c.gains.step_scale == 1e6);
  CHECK(c.thresholds.p_thresh == 1e-4);
  CHECK(c.thresholds.k_inv_thresh == 1e-4);
  REQUIRE(c.sources.size() == 1);
  CHECK(c.sources[0] == Vec2(30.0, 40.0));
  REQUIRE(c.agent_positions.size() == 4);
  CHECK(c.agent_positions[0] == Vec2(1.0, 1.0));
  CHECK(c.agent_positions[2] == Vec2(-1.0, -1.0));
  CHECK(c.leaders == std::vector<int>{0, 2});
  CHECK(c.doa_edges == std::vector<Edge>{{1, 0}, {3, 0}});
  CHECK(c.formation_edges.size() == 6);
  CHECK(c.dt == 1e-3);
  CHECK(c.duration == 20000.0);
}

TEST_CASE("multi config defaults") {
  const auto c = parse_config("scenario: multi\n");
  CHECK(c.exploration.beta == Approx(4.0 * std::sqrt(1e13)).epsilon(1e-15));
  CHECK(c.exploration.decay == 0.9);
  CHECK(c.exploration.escape_gain == 1.1);
  CHECK(c.exploration.growth == 1.2);
  CHECK(c.exploration.initial_radius == 3.1);
  CHECK(c.exploration.scoring_radius == 1.5);
  CHECK(c.exploration.detection_threshold == 1.0);
  CHECK(c.noise.step_variance == 0.01);
  CHECK(c.noise.doa_concentration == 100.0);
  CHECK(c.duration == 1000.0);
  CHECK(c.agent_positions.size() == 4);
  CHECK(c.sources.empty());
}

TEST_CASE("explicit values override defaults") {
  const auto c = parse_config(
      "scenario: single\nseed: 9\nstep_variance: 10\ndoa_concentration: 1\n"
      "leaders: [2, 4]\ndoa_edges: [[1, 2], [1, 4]]\nemit_trajectories: on\n");
  CHECK(c.seed == 9);
  CHECK(c.noise.step_variance == 10.0);
  CHECK(c.noise.doa_concentration == 1.0);
  CHECK(c.leaders == std::vector<int>{1, 3});
  CHECK(c.doa_edges == std::vector<Edge>{{0, 1}, {0, 3}});
  CHECK(c.emit_trajectories);
}

TEST_CASE("domain violations name their key") {
  CHECK(error_key("scenario: multi\nk_v: 1.5\n") == "k_v");
  CHECK(error_key("scenario: multi\nk_v: 0\n") == "k_v");
  CHECK(error_key("scenario: multi\nk_r_escape: 0.5\n") == "k_r_escape");
  CHECK(error_key("scenario: multi\nk_r_growth: 1\n") == "k_r_growth");
  CHECK(error_key("scenario: single\nstep_variance: -1\n") == "step_variance");
  CHECK(error_key("scenario: single\ndt: 0\n") == "dt");
  CHECK(error_key("scenario: single\nleaders: [1]\n") == "leaders");
  CHECK(error_key("scenario: single\nleaders: [0, 2]\n") == "leaders");
  CHECK(error_key("scenario: single\ndoa_edges: [[2, 1], [3, 4]]\n") == "doa_edges");
  CHECK(error_key("scenario: single\nsources: [[1, 2], [3, 4]]\n") == "sources");
  CHECK(error_key("scenario: single\nagent_positions: [[0, 0]]\n") == "agent_positions");
  CHECK(error_key("scenario: single\nemit_trajectories: maybe\n") == "emit_trajectories");
  CHECK(error_key("scenario: single\nalpha: abc\n") == "alpha");
}

TEST_CASE("structural problems are rejected") {
  CHECK(error_key("scenario: single\nbogus_key: 3\n") == "bogus_key");
  CHECK(error_key("seed: 3\n") == "scenario");
  CHECK(error_key("scenario: triple\n") == "scenario");
  CHECK(error_key("scenario: [single\n") == "");
  CHECK(error_key("- 1\n- 2\n") == "");
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/soundseek.yaml"), ConfigError);
}

TEST_CASE("effective config text round-trips") {
  for (auto kind : {ScenarioKind::Single, ScenarioKind::Multi}) {
    auto c = ScenarioConfig::defaults(kind);
    c.seed = 123456789012345ULL;
    c.noise.step_variance = 0.1 + 0.2;
    c.exploration.beta = 4.0 * std::sqrt(1e13);
    c.sources = {{1.0 / 3.0, -2.0 / 7.0}};
    const auto text = to_config_text(c);
    const auto back = parse_config(text);
    CHECK(to_config_text(back) == text);
    CHECK(back.seed == c.seed);
    CHECK(back.noise.step_variance == c.noise.step_variance);
    CHECK(back.exploration.beta == c.exploration.beta);
    CHECK(back.sources == c.sources);
    CHECK(back.leaders == c.leaders);
    CHECK(back.doa_edges == c.doa_edges);
  }
}

TEST_CASE("load from disk") {
  const auto path = std::filesystem::temp_directory_path() / "soundseek_test_config.yaml";
  {
    std::ofstream out(path);
    out << "scenario: multi\ntargets: 5\n";
  }
  const auto c = load_config(path);
  CHECK(c.targets == 5);
  std::filesystem::remove(path);
}
