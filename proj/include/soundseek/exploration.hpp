#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "soundseek/acoustics.hpp"
#include "soundseek/estimation.hpp"
#include "soundseek/formation.hpp"
#include "soundseek/vec2.hpp"

namespace soundseek {

struct ExplorationParams {
  double beta = 4.0 * 3162277.6601683795;  // 4 * sqrt(1e13)
  double gamma = 1.0;                      // s
  double decay = 0.9;                      // k_v, in (0, 1)
  double escape_gain = 1.1;                // k_r', >= 1
  double growth = 1.2;                     // k_r, > 1
  double initial_radius = 3.1;             // r_0, m
  double detection_threshold = 1.0;        // mu_s threshold, m
  double scoring_radius = 1.5;             // r_tt, m

  void validate() const;
};

struct ExploredArea {
  Vec2 center;
  double radius = 0.0;
};

/// Shared, grow-only set of explored disks.
class ExploredAreaRegistry {
 public:
  const std::vector<ExploredArea>& areas() const { return areas_; }
  std::size_t size() const { return areas_.size(); }

  /// Area containing `point` (||p - c|| <= r). With several matches the one
  /// whose boundary is nearest wins, then the earliest created.
  std::optional<std::size_t> containing_area(const Vec2& point) const;

  /// Grows the containing area by `params.growth`, or appends a new area of
  /// radius `params.initial_radius` centered at `point`. Returns the area id.
  std::size_t register_detection(const Vec2& point, const ExplorationParams& params);

 private:
  std::vector<ExploredArea> areas_;
};

/// Direction from the weakest to the strongest channel. Ties resolve to the
/// lowest channel index; nullopt when all channels read the same.
std::optional<double> array_doa(const ChannelIntensities& intensities,
                                const ChannelPositions& positions);

/// beta (1/I_min - 1/I_max).
double array_step(const ChannelIntensities& intensities, double beta);

/// Virtual velocity update on a Listening -> Moving switch. Inside an
/// explored area the agent takes an escape vector of length k_r' r_t along a
/// random multiple of pi/4; otherwise v' = k_v v + mu_s (cos mu_theta, sin mu_theta).
Vec2 update_virtual_velocity(const Vec2& virtual_velocity, const Vec2& position,
                             const ExploredAreaRegistry& registry, double step, double heading,
                             const ExplorationParams& params, Rng& rng);

/// Constant-speed reference along the virtual velocity; a zero vector holds.
Reference exploration_reference(const Vec2& virtual_velocity, double speed, double dt,
                                const Reference& current);

/// Number of sources with at least one detection point within `scoring_radius`.
int score_detections(std::span<const Vec2> detections, std::span<const SoundSource> sources,
                     double scoring_radius);

}  // namespace soundseek
