#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "soundseek/vec2.hpp"

namespace soundseek {

/// Raised when two agents coincide and a bearing is undefined.
class DegenerateFormation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Ordered agent pair (i, j), zero-based. For DoA edges the intensity
/// difference is I_j - I_i along the bearing from i to j.
struct Edge {
  int from = 0;
  int to = 0;
  bool operator==(const Edge&) const = default;
};

/// Unit vector from p_i towards p_j.
Vec2 bearing(const Vec2& p_i, const Vec2& p_j);

/// I(2) - b b^T.
Eigen::Matrix2d orthogonal_projector(const Vec2& b);

/// Undirected formation graph with desired bearings taken from a reference
/// configuration.
class FormationGraph {
 public:
  /// Throws std::invalid_argument on bad indices, duplicate edges or fewer
  /// than two leaders; DegenerateFormation on coincident reference positions.
  FormationGraph(std::span<const Vec2> reference_positions, std::vector<Edge> edges,
                 std::vector<int> leaders);

  /// Complete graph over the reference positions.
  static FormationGraph complete(std::span<const Vec2> reference_positions,
                                 std::vector<int> leaders);

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& leaders() const { return leaders_; }
  bool is_leader(int i) const;
  const std::vector<int>& neighbors(int i) const { return neighbors_.at(i); }

  /// b_ij^d; throws std::out_of_range if (i, j) is not an edge.
  const Vec2& desired_bearing(int i, int j) const;

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> leaders_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::optional<Vec2>> desired_;  // row-major node_count x node_count
};

/// Ascent direction sum over doa_edges of (I_j - I_i) b_ij, as an angle.
/// Returns nullopt when the combination vanishes (no usable signal).
/// Throws std::invalid_argument if the edge bearings do not span the plane.
std::optional<double> formation_doa(std::span<const double> intensities,
                                    std::span<const Vec2> positions,
                                    std::span<const Edge> doa_edges);

/// max(alpha |1/I1 - 1/I3|, alpha |1/I2 - 1/I4|) for the four-agent square.
double formation_step(std::span<const double> intensities, double alpha);

struct GainSet {
  double leader_kp = 10.0;
  double leader_kd = 10.0;
  double follower_kp = 10.0;
  double follower_kd = 10.0;
  double cruise_speed = 0.2;  // c, m/s
  double step_scale = 1e6;    // alpha

  void validate() const;
};

/// Desired trajectory state of a tracked agent.
struct Reference {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
};

/// Constant-speed reference along `heading`, advanced by one Euler step.
Reference leader_reference(double heading, double speed, double dt, const Reference& current);

/// PD tracking law u = kd (v_d - v) + kp (p_d - p).
Vec2 leader_control(const Vec2& position, const Vec2& velocity, const Reference& reference,
                    double kp, double kd);

struct NeighborState {
  Vec2 position;
  Vec2 velocity;
  Vec2 desired_bearing;  // b_ij^d from the follower i to this neighbor j
};

/// Bearing-maneuvering follower law
/// u_i = -sum_j P(b_ij^d) (kd (v_i - v_j) + kp (p_i - p_j)).
Vec2 follower_control(const Vec2& position, const Vec2& velocity,
                      std::span<const NeighborState> neighbors, double kp, double kd);

/// Convenience overload that reads neighbors and desired bearings from `graph`.
Vec2 follower_control(int agent, std::span<const Vec2> positions, std::span<const Vec2> velocities,
                      const FormationGraph& graph, double kp, double kd);

/// Largest ||b_ij(t) - b_ij^d|| over the graph edges.
double max_bearing_error(std::span<const Vec2> positions, const FormationGraph& graph);

}  // namespace soundseek
