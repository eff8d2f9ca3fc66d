#pragma once

#include <Eigen/Core>

namespace soundseek {

using Vec2 = Eigen::Vector2d;

inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline bool is_finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

}  // namespace soundseek
