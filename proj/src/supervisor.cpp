#include "soundseek/supervisor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soundseek {

const char* to_string(Mode mode) { return mode == Mode::Listening ? "listening" : "moving"; }

void SwitchThresholds::validate() const {
  if (!(p_thresh > 0.0) || !(k_inv_thresh > 0.0) || !(settle_speed > 0.0)) {
    throw std::invalid_argument("switch thresholds must be strictly positive");
  }
}

SupervisorState make_supervisor(const Vec2& anchor, const NoiseModel& noise) {
  noise.validate();
  SupervisorState s;
  s.measurement_anchor = anchor;
  s.step_estimate = reset_gaussian(noise.step_variance);
  s.doa_estimate = reset_vonmises(noise.doa_concentration);
  return s;
}

SupervisorState listening_step(const SupervisorState& state, double step_measurement,
                               double doa_measurement) {
  if (state.mode != Mode::Listening) {
    throw std::logic_error("listening_step called while moving");
  }
  SupervisorState next = state;
  next.step_estimate = gaussian_update(state.step_estimate, step_measurement);
  next.doa_estimate = vonmises_update(state.doa_estimate, doa_measurement);
  ++next.measurement_count;
  return next;
}

bool should_start_moving(const SupervisorState& state, const SwitchThresholds& thresholds) {
  if (state.mode != Mode::Listening) {
    throw std::logic_error("should_start_moving called while moving");
  }
  return state.step_estimate.uncertainty() <= thresholds.p_thresh &&
         state.doa_estimate.inverse_concentration() <= thresholds.k_inv_thresh;
}

bool should_start_listening(const SupervisorState& state, const Vec2& position, double step_target) {
  if (state.mode != Mode::Moving) {
    throw std::logic_error("should_start_listening called while listening");
  }
  return (position - state.measurement_anchor).norm() >= step_target;
}

SupervisorState transition(const SupervisorState& state, const Vec2& position) {
  SupervisorState next = state;
  if (state.mode == Mode::Listening) {
    next.mode = Mode::Moving;
    next.settling = false;
    // A noisy negative step estimate commands no movement.
    next.latched_step = std::max(state.step_estimate.mean, 0.0);
    next.latched_heading = state.doa_estimate.mean;
    return next;
  }
  next.mode = Mode::Listening;
  next.settling = true;
  next.measurement_anchor = position;
  next.step_estimate = reset_gaussian(state.step_estimate.measurement_variance);
  next.doa_estimate = reset_vonmises(state.doa_estimate.measurement_concentration);
  next.measurement_count = 0;
  return next;
}

}  // namespace soundseek
