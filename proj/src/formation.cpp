#include "soundseek/formation.hpp"

#include <algorithm>
#include <cmath>

namespace soundseek {

Vec2 bearing(const Vec2& p_i, const Vec2& p_j) {
  const Vec2 d = p_j - p_i;
  const double n = d.norm();
  if (!(n > 0.0)) {
    throw DegenerateFormation("bearing undefined for coincident agents");
  }
  return d / n;
}

Eigen::Matrix2d orthogonal_projector(const Vec2& b) {
  return Eigen::Matrix2d::Identity() - b * b.transpose();
}

FormationGraph::FormationGraph(std::span<const Vec2> reference_positions, std::vector<Edge> edges,
                               std::vector<int> leaders)
    : node_count_(static_cast<int>(reference_positions.size())),
      edges_(std::move(edges)),
      leaders_(std::move(leaders)),
      neighbors_(reference_positions.size()),
      desired_(reference_positions.size() * reference_positions.size()) {
  const auto valid = [this](int i) { return i >= 0 && i < node_count_; };
  std::sort(leaders_.begin(), leaders_.end());
  leaders_.erase(std::unique(leaders_.begin(), leaders_.end()), leaders_.end());
  if (leaders_.size() < 2) {
    throw std::invalid_argument("formation needs at least two leaders");
  }
  for (int l : leaders_) {
    if (!valid(l)) throw std::invalid_argument("leader index out of range");
  }
  for (const auto& e : edges_) {
    if (!valid(e.from) || !valid(e.to) || e.from == e.to) {
      throw std::invalid_argument("formation edge has invalid endpoints");
    }
    auto& slot = desired_[e.from * node_count_ + e.to];
    if (slot) throw std::invalid_argument("duplicate formation edge");
    const Vec2 b = bearing(reference_positions[e.from], reference_positions[e.to]);
    slot = b;
    desired_[e.to * node_count_ + e.from] = Vec2(-b);
    neighbors_[e.from].push_back(e.to);
    neighbors_[e.to].push_back(e.from);
  }
  for (auto& n : neighbors_) std::sort(n.begin(), n.end());
}

FormationGraph FormationGraph::complete(std::span<const Vec2> reference_positions,
                                        std::vector<int> leaders) {
  std::vector<Edge> edges;
  const int n = static_cast<int>(reference_positions.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return FormationGraph(reference_positions, std::move(edges), std::move(leaders));
}

bool FormationGraph::is_leader(int i) const {
  return std::binary_search(leaders_.begin(), leaders_.end(), i);
}

const Vec2& FormationGraph::desired_bearing(int i, int j) const {
  if (i < 0 || j < 0 || i >= node_count_ || j >= node_count_ || !desired_[i * node_count_ + j]) {
    throw std::out_of_range("not a formation edge");
  }
  return *desired_[i * node_count_ + j];
}

std::optional<double> formation_doa(std::span<const double> intensities,
                                    std::span<const Vec2> positions,
                                    std::span<const Edge> doa_edges) {
  if (intensities.size() != positions.size()) {
    throw std::invalid_argument("formation_doa: size mismatch");
  }
  Vec2 nu = Vec2::Zero();
  double span_measure = 0.0;
  std::optional<Vec2> first;
  for (const auto& e : doa_edges) {
    const auto n = static_cast<int>(positions.size());
    if (e.from < 0 || e.to < 0 || e.from >= n || e.to >= n) {
      throw std::invalid_argument("formation_doa: edge out of range");
    }
    const Vec2 b = bearing(positions[e.from], positions[e.to]);
    if (!first) {
      first = b;
    } else {
      span_measure = std::max(span_measure, std::abs(first->x() * b.y() - first->y() * b.x()));
    }
    nu += (intensities[e.to] - intensities[e.from]) * b;
  }
  if (!(span_measure > 1e-9)) {
    throw std::invalid_argument("formation_doa: edge bearings do not span the plane");
  }
  if (nu.x() == 0.0 && nu.y() == 0.0) return std::nullopt;
  return std::atan2(nu.y(), nu.x());
}

double formation_step(std::span<const double> intensities, double alpha) {
  if (intensities.size() != 4) {
    throw std::invalid_argument("formation_step expects four agent intensities");
  }
  const double a = alpha * std::abs(1.0 / intensities[0] - 1.0 / intensities[2]);
  const double b = alpha * std::abs(1.0 / intensities[1] - 1.0 / intensities[3]);
  return std::max(a, b);
}

void GainSet::validate() const {
  for (double g : {leader_kp, leader_kd, follower_kp, follower_kd, cruise_speed, step_scale}) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw std::invalid_argument("gains must be positive and finite");
    }
  }
}

Reference leader_reference(double heading, double speed, double dt, const Reference& current) {
  Reference next;
  next.velocity = speed * unit_from_angle(heading);
  next.position = current.position + next.velocity * dt;
  return next;
}

Vec2 leader_control(const Vec2& position, const Vec2& velocity, const Reference& reference,
                    double kp, double kd) {
  return kd * (reference.velocity - velocity) + kp * (reference.position - position);
}

Vec2 follower_control(const Vec2& position, const Vec2& velocity,
                      std::span<const NeighborState> neighbors, double kp, double kd) {
  Vec2 u = Vec2::Zero();
  for (const auto& n : neighbors) {
    const Vec2 rel = kd * (velocity - n.velocity) + kp * (position - n.position);
    u -= orthogonal_projector(n.desired_bearing) * rel;
  }
  return u;
}

Vec2 follower_control(int agent, std::span<const Vec2> positions, std::span<const Vec2> velocities,
                      const FormationGraph& graph, double kp, double kd) {
  const auto& ids = graph.neighbors(agent);
  std::vector<NeighborState> neighbors;
  neighbors.reserve(ids.size());
  for (int j : ids) {
    neighbors.push_back({positions[j], velocities[j], graph.desired_bearing(agent, j)});
  }
  return follower_control(positions[agent], velocities[agent], neighbors, kp, kd);
}

double max_bearing_error(std::span<const Vec2> positions, const FormationGraph& graph) {
  double worst = 0.0;
  for (const auto& e : graph.edges()) {
    const Vec2 b = bearing(positions[e.from], positions[e.to]);
    worst = std::max(worst, (b - graph.desired_bearing(e.from, e.to)).norm());
  }
  return worst;
}

}  // namespace soundseek
