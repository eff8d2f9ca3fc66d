#include "soundseek/acoustics.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace soundseek {

namespace {

// cos/sin of h*pi/3 for h = 0..5. Exact table values keep the hexagon
// symmetric to the last bit (std::sin(pi) != 0).
constexpr double kHalfSqrt3 = 0.86602540378443864676;
constexpr std::array<double, kChannelCount> kCos = {1.0, 0.5, -0.5, -1.0, -0.5, 0.5};
constexpr std::array<double, kChannelCount> kSin = {0.0, kHalfSqrt3, kHalfSqrt3, 0.0, -kHalfSqrt3, -kHalfSqrt3};

}  // namespace

AcousticWorld::AcousticWorld(std::vector<SoundSource> sources) : sources_(std::move(sources)) {
  if (sources_.empty()) {
    throw std::invalid_argument("acoustic world needs at least one source");
  }
  for (const auto& s : sources_) {
    if (!(s.power > 0.0) || !std::isfinite(s.power)) {
      throw std::invalid_argument("source power must be positive and finite");
    }
    if (!is_finite(s.position)) {
      throw std::invalid_argument("source position must be finite");
    }
  }
}

double source_intensity(double power, double squared_distance) {
  constexpr double kFourPi = 4.0 * std::numbers::pi;
  if (squared_distance <= 1.0) {
    return power / kFourPi;
  }
  return power / (kFourPi * squared_distance);
}

double AcousticWorld::intensity_at(const Vec2& point) const {
  double total = 0.0;
  for (const auto& s : sources_) {
    total += source_intensity(s.power, (point - s.position).squaredNorm());
  }
  return total;
}

ChannelPositions microphone_positions(const MicrophoneArray& array) {
  if (!(array.radius > 0.0)) {
    throw std::invalid_argument("microphone array radius must be positive");
  }
  ChannelPositions out;
  for (int h = 0; h < kChannelCount; ++h) {
    out[h] = array.center + array.radius * Vec2(kCos[h], kSin[h]);
  }
  return out;
}

ChannelIntensities array_intensities(const AcousticWorld& world, const MicrophoneArray& array) {
  const auto mics = microphone_positions(array);
  ChannelIntensities out;
  for (int h = 0; h < kChannelCount; ++h) {
    out[h] = world.intensity_at(mics[h]);
  }
  return out;
}

double mean_intensity(const ChannelIntensities& channels) {
  return std::accumulate(channels.begin(), channels.end(), 0.0) / kChannelCount;
}

double omni_intensity(const AcousticWorld& world, const MicrophoneArray& array) {
  return mean_intensity(array_intensities(world, array));
}

}  // namespace soundseek
