#pragma once

#include "soundseek/estimation.hpp"
#include "soundseek/vec2.hpp"

namespace soundseek {

enum class Mode { Listening, Moving };

const char* to_string(Mode mode);

struct SwitchThresholds {
  double p_thresh = 1e-4;      // step variance P, m^2
  double k_inv_thresh = 1e-4;  // K^-1
  double settle_speed = 1e-3;  // m/s, stillness required before measuring

  void validate() const;
};

/// Hybrid supervisor of one control unit (the whole formation, or one agent).
///
/// A unit enters Listening with `settling` set; measurements are taken only
/// once the simulation loop has cleared it. The anchor is the position where
/// the current or most recent listening phase took place.
struct SupervisorState {
  Mode mode = Mode::Listening;
  bool settling = true;
  Vec2 measurement_anchor = Vec2::Zero();
  GaussianEstimate step_estimate;
  VonMisesEstimate doa_estimate;
  // Latched on Listening -> Moving and frozen for the movement phase.
  double latched_step = 0.0;
  double latched_heading = 0.0;
  long measurement_count = 0;
};

/// Fresh unit in Listening at `anchor` with reset estimators.
SupervisorState make_supervisor(const Vec2& anchor, const NoiseModel& noise);

/// One RBE epoch. Throws std::logic_error outside Listening.
SupervisorState listening_step(const SupervisorState& state, double step_measurement,
                               double doa_measurement);

/// P <= P_thresh and K^-1 <= K_thresh. Throws std::logic_error outside Listening.
bool should_start_moving(const SupervisorState& state, const SwitchThresholds& thresholds);

/// ||position - anchor|| >= step_target. Throws std::logic_error outside Moving.
bool should_start_listening(const SupervisorState& state, const Vec2& position, double step_target);

/// Flips the mode. Entering Listening resets both estimators and moves the
/// anchor to `position`; entering Moving latches the current estimates, with
/// the step target floored at zero.
SupervisorState transition(const SupervisorState& state, const Vec2& position);

}  // namespace soundseek
