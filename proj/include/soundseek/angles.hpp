#pragma once

#include <cmath>
#include <numbers>

namespace soundseek {

/// Maps any finite angle into (-pi, pi].
inline double normalize_angle(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

/// Signed circular difference a - b in (-pi, pi].
inline double angle_difference(double a, double b) {
  return normalize_angle(std::atan2(std::sin(a - b), std::cos(a - b)));
}

}  // namespace soundseek
