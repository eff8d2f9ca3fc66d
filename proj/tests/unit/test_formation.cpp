#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Geometry>

#include "soundseek/acoustics.hpp"
#include "soundseek/angles.hpp"
#include "soundseek/formation.hpp"

using namespace soundseek;
using doctest::Approx;

namespace {

const double kPi = std::numbers::pi;

const std::vector<Vec2> kSquare = {{1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}, {-1.0, 1.0}};
const std::vector<Edge> kDoaEdges = {{1, 0}, {3, 0}};

std::vector<double> point_intensities(const std::vector<Vec2>& agents, Vec2 source) {
  const AcousticWorld world({{source, 1e8}});
  std::vector<double> out;
  for (const auto& p : agents) out.push_back(world.intensity_at(p));
  return out;
}

std::vector<Vec2> shifted(const std::vector<Vec2>& pts, Vec2 by) {
  std::vector<Vec2> out;
  for (const auto& p : pts) out.push_back(p + by);
  return out;
}

}  // namespace

TEST_CASE("bearing vectors") {
  CHECK(bearing({0.0, 0.0}, {0.0, 5.0}) == Vec2(0.0, 1.0));
  CHECK(bearing(kSquare[1], kSquare[0]) == Vec2(0.0, 1.0));
  const Vec2 a{0.3, -2.0};
  const Vec2 b{-4.1, 7.7};
  CHECK((bearing(a, b) + bearing(b, a)).norm() == 0.0);
  CHECK(bearing(a, b).norm() == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(bearing(a, a), DegenerateFormation);
}

TEST_CASE("projector algebra") {
  for (double angle = -3.0; angle < 3.2; angle += 0.37) {
    const Vec2 b = unit_from_angle(angle);
    const Eigen::Matrix2d P = orthogonal_projector(b);
    CHECK((P * b).norm() < 1e-15);
    CHECK((P * P - P).norm() < 1e-15);
    CHECK((P.transpose() - P).norm() == 0.0);
  }
}

TEST_CASE("formation graph") {
  const auto g = FormationGraph::complete(kSquare, {0, 2});
  CHECK(g.node_count() == 4);
  CHECK(g.edges().size() == 6);
  CHECK(g.is_leader(0));
  CHECK_FALSE(g.is_leader(1));
  CHECK(g.is_leader(2));
  CHECK(g.neighbors(1).size() == 3);
  for (const auto& e : g.edges()) {
    CHECK(g.desired_bearing(e.from, e.to).norm() == Approx(1.0));
    CHECK(g.desired_bearing(e.from, e.to) == -g.desired_bearing(e.to, e.from));
  }
  CHECK(g.desired_bearing(1, 0) == Vec2(0.0, 1.0));

  const FormationGraph ring(kSquare, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {0, 2});
  CHECK_THROWS_AS(ring.desired_bearing(0, 2), std::out_of_range);

  CHECK_THROWS_AS(FormationGraph(kSquare, {{0, 1}}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(FormationGraph(kSquare, {{0, 4}}, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(FormationGraph(kSquare, {{0, 1}, {1, 0}}, {0, 2}), std::invalid_argument);
  const std::vector<Vec2> collapsed = {{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(FormationGraph::complete(collapsed, {0, 2}), DegenerateFormation);
}

TEST_CASE("formation doa on the axes") {
  const auto east = formation_doa(point_intensities(kSquare, {100.0, 0.0}), kSquare, kDoaEdges);
  REQUIRE(east);
  CHECK(*east == Approx(0.0).scale(1.0));
  const auto north = formation_doa(point_intensities(kSquare, {0.0, 100.0}), kSquare, kDoaEdges);
  REQUIRE(north);
  CHECK(*north == Approx(kPi / 2));
}

TEST_CASE("formation doa points at the source from the start") {
  const auto I = point_intensities(kSquare, {30.0, 40.0});
  const auto doa = formation_doa(I, kSquare, kDoaEdges);
  REQUIRE(doa);
  CHECK(std::abs(*doa - std::atan2(40.0, 30.0)) < 0.1);

  // Brute-force gradient direction of the field at the centroid.
  const AcousticWorld world({{{30.0, 40.0}, 1e8}});
  const double h = 1e-4;
  const Vec2 grad{world.intensity_at({h, 0.0}) - world.intensity_at({-h, 0.0}),
                  world.intensity_at({0.0, h}) - world.intensity_at({0.0, -h})};
  CHECK(std::abs(angle_difference(*doa, std::atan2(grad.y(), grad.x()))) < 0.1);
}

TEST_CASE("formation doa is translation invariant and rotation equivariant") {
  const Vec2 source{30.0, 40.0};
  const auto base = *formation_doa(point_intensities(kSquare, source), kSquare, kDoaEdges);
  const Vec2 by{-12.5, 3.25};
  const auto moved = shifted(kSquare, by);
  const auto translated = formation_doa(point_intensities(moved, source + by), moved, kDoaEdges);
  CHECK(*translated == Approx(base).epsilon(1e-9));

  for (double phi = -3.0; phi < 3.2; phi += 0.5) {
    const Eigen::Rotation2Dd rot(phi);
    std::vector<Vec2> turned;
    for (const auto& p : kSquare) turned.push_back(rot * p);
    const auto doa = formation_doa(point_intensities(turned, rot * source), turned, kDoaEdges);
    CHECK(std::abs(angle_difference(*doa, base + phi)) < 1e-9);
  }
}

TEST_CASE("formation doa errors") {
  const std::vector<double> flat(4, 5.0);
  CHECK_FALSE(formation_doa(flat, kSquare, kDoaEdges).has_value());
  const std::vector<Edge> parallel = {{1, 0}, {2, 3}};
  CHECK_THROWS_AS(formation_doa(flat, kSquare, parallel), std::invalid_argument);
  const std::vector<double> short_list(3, 1.0);
  CHECK_THROWS_AS(formation_doa(short_list, kSquare, kDoaEdges), std::invalid_argument);
}

TEST_CASE("formation step") {
  const auto I = point_intensities(kSquare, {30.0, 40.0});
  const double oracle = 1e6 * 4.0 * kPi * 280.0 / 1e8;
  CHECK(std::abs(formation_step(I, 1e6) - oracle) < 1e-6);
  CHECK(formation_step(I, 1e6) == Approx(35.19).epsilon(1e-3));

  const std::vector<double> flat(4, 3.0);
  CHECK(formation_step(flat, 1e6) == 0.0);

  // Same geometry, centroid 50 m and 5 m from the source.
  const Vec2 dir = Vec2(30.0, 40.0).normalized();
  const Vec2 source{30.0, 40.0};
  const auto far = shifted(kSquare, source - 50.0 * dir);
  const auto near = shifted(kSquare, source - 5.0 * dir);
  CHECK(formation_step(point_intensities(near, source), 1e6) <
        formation_step(point_intensities(far, source), 1e6));

  CHECK_THROWS_AS(formation_step(std::vector<double>(3, 1.0), 1e6), std::invalid_argument);
}

TEST_CASE("step is zero exactly at pair symmetry") {
  const auto centered = point_intensities(kSquare, {0.0, 0.0});
  CHECK(formation_step(centered, 1e6) == 0.0);
  const auto diagonal = point_intensities(kSquare, {20.0, -20.0});
  CHECK(formation_step(diagonal, 1e6) > 0.0);
}

TEST_CASE("leader reference") {
  Reference r{{0.0, 0.0}, {0.0, 0.0}};
  r = leader_reference(0.0, 0.2, 1e-3, r);
  CHECK(r.position.x() == Approx(0.0002));
  CHECK(r.position.y() == 0.0);
  CHECK(r.velocity.norm() == Approx(0.2));
  Reference up{{0.0, 0.0}, {0.0, 0.0}};
  up = leader_reference(kPi / 2, 0.2, 1e-3, up);
  CHECK(up.position.x() == Approx(0.0).scale(1.0));
  CHECK(up.position.y() == Approx(0.0002));
  for (int i = 0; i < 1000; ++i) {
    r = leader_reference(1.1, 0.2, 1e-3, r);
    CHECK(r.velocity.norm() == Approx(0.2).epsilon(1e-14));
  }
}

TEST_CASE("leader pd law") {
  const Reference ref{{1.0, 2.0}, {0.5, 0.0}};
  CHECK(leader_control({1.0, 2.0}, {0.5, 0.0}, ref, 10.0, 10.0).norm() == 0.0);
  CHECK(leader_control({0.0, 2.0}, {0.5, 0.0}, ref, 10.0, 10.0) == Vec2(10.0, 0.0));
}

TEST_CASE("leader pd closed loop settles") {
  // Roots of s^2 + 10 s + 10 are real and negative.
  const double disc = 100.0 - 40.0;
  CHECK((-10.0 + std::sqrt(disc)) / 2.0 < 0.0);

  Vec2 p{0.0, 0.0};
  Vec2 v{0.0, 0.0};
  const Reference ref{{0.1, -0.05}, {0.0, 0.0}};
  const double dt = 1e-3;
  for (int k = 0; k < 5000; ++k) {
    v += leader_control(p, v, ref, 10.0, 10.0) * dt;
    p += v * dt;
  }
  CHECK((p - ref.position).norm() < 1e-3);
}

TEST_CASE("follower law single neighbor") {
  const std::array<NeighborState, 1> nb{{{{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}}};
  const Vec2 u = follower_control({2.0, 1.0}, {0.0, 0.0}, nb, 10.0, 10.0);
  CHECK(u.x() == Approx(0.0).scale(1.0));
  CHECK(u.y() == Approx(-10.0));
}

TEST_CASE("follower law vanishes at the desired formation") {
  const auto g = FormationGraph::complete(kSquare, {0, 2});
  std::vector<Vec2> pos;
  for (const auto& p : kSquare) pos.push_back(3.0 * p + Vec2(7.0, -2.0));
  const std::vector<Vec2> vel(4, Vec2(0.2, 0.1));
  for (int i : {1, 3}) {
    CHECK(follower_control(i, pos, vel, g, 10.0, 10.0).norm() < 1e-12);
  }
  CHECK(max_bearing_error(pos, g) < 1e-15);

  pos[1] += Vec2(0.3, 0.0);
  CHECK(follower_control(1, pos, vel, g, 10.0, 10.0).norm() > 0.0);
  CHECK(max_bearing_error(pos, g) > 0.0);
}

TEST_CASE("gain validation") {
  CHECK_NOTHROW(GainSet{}.validate());
  GainSet g;
  g.cruise_speed = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = GainSet{};
  g.follower_kd = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
