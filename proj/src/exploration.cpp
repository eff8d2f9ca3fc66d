#include "soundseek/exploration.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace soundseek {

void ExplorationParams::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(beta)) throw std::invalid_argument("beta must be positive");
  if (!positive(gamma)) throw std::invalid_argument("gamma must be positive");
  if (!(decay > 0.0 && decay < 1.0)) throw std::invalid_argument("k_v must lie in (0, 1)");
  if (!(escape_gain >= 1.0) || !std::isfinite(escape_gain)) {
    throw std::invalid_argument("k_r_escape must be >= 1");
  }
  if (!(growth > 1.0) || !std::isfinite(growth)) throw std::invalid_argument("k_r_growth must be > 1");
  if (!positive(initial_radius)) throw std::invalid_argument("r0 must be positive");
  if (!positive(detection_threshold)) throw std::invalid_argument("mu_s_thresh must be positive");
  if (!positive(scoring_radius)) throw std::invalid_argument("r_tt must be positive");
}

std::optional<std::size_t> ExploredAreaRegistry::containing_area(const Vec2& point) const {
  std::optional<std::size_t> best;
  double best_margin = 0.0;
  for (std::size_t k = 0; k < areas_.size(); ++k) {
    const double margin = areas_[k].radius - (point - areas_[k].center).norm();
    if (margin < 0.0) continue;
    if (!best || margin < best_margin) {
      best = k;
      best_margin = margin;
    }
  }
  return best;
}

std::size_t ExploredAreaRegistry::register_detection(const Vec2& point,
                                                     const ExplorationParams& params) {
  if (auto k = containing_area(point)) {
    areas_[*k].radius *= params.growth;
    return *k;
  }
  areas_.push_back({point, params.initial_radius});
  return areas_.size() - 1;
}

std::optional<double> array_doa(const ChannelIntensities& intensities,
                                const ChannelPositions& positions) {
  int hi = 0;
  int lo = 0;
  for (int h = 1; h < kChannelCount; ++h) {
    if (intensities[h] > intensities[hi]) hi = h;
    if (intensities[h] < intensities[lo]) lo = h;
  }
  if (!(intensities[hi] > intensities[lo])) return std::nullopt;
  const Vec2 nu = positions[hi] - positions[lo];
  return std::atan2(nu.y(), nu.x());
}

double array_step(const ChannelIntensities& intensities, double beta) {
  double hi = intensities[0];
  double lo = intensities[0];
  for (double v : intensities) {
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return beta * (1.0 / lo - 1.0 / hi);
}

Vec2 update_virtual_velocity(const Vec2& virtual_velocity, const Vec2& position,
                             const ExploredAreaRegistry& registry, double step, double heading,
                             const ExplorationParams& params, Rng& rng) {
  if (auto k = registry.containing_area(position)) {
    std::uniform_int_distribution<int> sector(0, 7);
    const double angle = sector(rng) * std::numbers::pi / 4.0;
    return params.escape_gain * registry.areas()[*k].radius * unit_from_angle(angle);
  }
  return params.decay * virtual_velocity + step * unit_from_angle(heading);
}

Reference exploration_reference(const Vec2& virtual_velocity, double speed, double dt,
                                const Reference& current) {
  if (virtual_velocity.x() == 0.0 && virtual_velocity.y() == 0.0) {
    return {current.position, Vec2::Zero()};
  }
  const Vec2 velocity = speed * virtual_velocity.normalized();
  return {current.position + velocity * dt, velocity};
}

int score_detections(std::span<const Vec2> detections, std::span<const SoundSource> sources,
                     double scoring_radius) {
  int count = 0;
  for (const auto& s : sources) {
    for (const auto& d : detections) {
      if ((d - s.position).norm() <= scoring_radius) {
        ++count;
        break;
      }
    }
  }
  return count;
}

}  // namespace soundseek
