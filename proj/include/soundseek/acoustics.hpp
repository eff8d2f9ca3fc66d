#pragma once

#include <array>
#include <vector>

#include "soundseek/vec2.hpp"

namespace soundseek {

/// Static point source emitting `power` watts (W0).
struct SoundSource {
  Vec2 position;
  double power = 0.0;
};

/// Set of incoherent static sources. Intensities add.
class AcousticWorld {
 public:
  /// Throws std::invalid_argument on an empty list, non-positive power or a
  /// non-finite position.
  explicit AcousticWorld(std::vector<SoundSource> sources);

  const std::vector<SoundSource>& sources() const { return sources_; }

  /// Sum over sources of W0/(4*pi*d^2), clamped to W0/(4*pi) for d <= 1 m.
  double intensity_at(const Vec2& point) const;

 private:
  std::vector<SoundSource> sources_;
};

/// Intensity of a single source at distance^2 `squared_distance`.
double source_intensity(double power, double squared_distance);

inline constexpr int kChannelCount = 6;
using ChannelIntensities = std::array<double, kChannelCount>;
using ChannelPositions = std::array<Vec2, kChannelCount>;

/// Circular array of six omnidirectional microphones, channel h at angle
/// h*pi/3 (zero-based) around the center.
struct MicrophoneArray {
  Vec2 center = Vec2::Zero();
  double radius = 0.1;
};

ChannelPositions microphone_positions(const MicrophoneArray& array);
ChannelIntensities array_intensities(const AcousticWorld& world, const MicrophoneArray& array);

/// Mean of the six channels; the reading of an agent used as an omni sensor.
double omni_intensity(const AcousticWorld& world, const MicrophoneArray& array);
double mean_intensity(const ChannelIntensities& channels);

}  // namespace soundseek
