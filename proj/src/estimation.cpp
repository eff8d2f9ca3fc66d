#include "soundseek/estimation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "soundseek/angles.hpp"

namespace soundseek {

void NoiseModel::validate() const {
  if (!(step_variance > 0.0) || !std::isfinite(step_variance)) {
    throw std::invalid_argument("step_variance must be positive and finite");
  }
  if (!(doa_concentration > 0.0) || !std::isfinite(doa_concentration)) {
    throw std::invalid_argument("doa_concentration must be positive and finite");
  }
}

GaussianEstimate reset_gaussian(double measurement_variance) {
  GaussianEstimate est;
  est.measurement_variance = measurement_variance;
  return est;
}

VonMisesEstimate reset_vonmises(double measurement_concentration) {
  VonMisesEstimate est;
  est.measurement_concentration = measurement_concentration;
  return est;
}

GaussianEstimate gaussian_update(const GaussianEstimate& est, double measurement) {
  if (!std::isfinite(measurement)) {
    throw std::invalid_argument("gaussian_update: non-finite measurement");
  }
  GaussianEstimate next = est;
  const double r = est.measurement_variance;
  if (est.prior_is_infinite) {
    next.mean = measurement;
    next.variance = r;
    next.prior_is_infinite = false;
    return next;
  }
  const double p = est.variance;
  next.variance = r * p / (r + p);
  next.mean = (measurement * p + est.mean * r) / (r + p);
  return next;
}

VonMisesEstimate vonmises_update(const VonMisesEstimate& est, double measurement) {
  if (!std::isfinite(measurement)) {
    throw std::invalid_argument("vonmises_update: non-finite measurement");
  }
  const double k = est.measurement_concentration;
  const double c = est.concentration * std::cos(est.mean) + k * std::cos(measurement);
  const double s = est.concentration * std::sin(est.mean) + k * std::sin(measurement);
  VonMisesEstimate next = est;
  next.concentration = std::hypot(c, s);
  next.mean = normalize_angle(std::atan2(s, c));
  return next;
}

double vonmises_concentration_magnitude_form(double prior_concentration, double prior_mean,
                                             double measurement_concentration, double measurement) {
  const double kk = prior_concentration;
  const double k = measurement_concentration;
  // K^2 + k^2 + 2Kk cos(d) rewritten as (K - k)^2 + 4Kk cos^2(d/2) to avoid cancellation.
  const double half = std::cos(0.5 * angle_difference(prior_mean, measurement));
  return std::sqrt((kk - k) * (kk - k) + 4.0 * kk * k * half * half);
}

double sample_step(Rng& rng, double true_step, double step_variance) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return true_step + std::sqrt(step_variance) * normal(rng);
}

double sample_doa(Rng& rng, double true_doa, double concentration) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  // r = (1 + rho^2) / (2 rho) written in a form that stays accurate for large kappa.
  const double half_inv = 0.5 / concentration;
  const double r = half_inv + std::sqrt(1.0 + half_inv * half_inv);
  double f = 1.0;
  for (;;) {
    const double z = std::cos(std::numbers::pi * uniform(rng));
    f = (1.0 + r * z) / (r + z);
    const double c = concentration * (r - f);
    const double u = uniform(rng);
    if (c * (2.0 - c) - u > 0.0 || std::log(c / u) + 1.0 - c >= 0.0) break;
  }
  const double offset = std::acos(std::clamp(f, -1.0, 1.0));
  const double sign = uniform(rng) < 0.5 ? -1.0 : 1.0;
  return normalize_angle(true_doa + sign * offset);
}

}  // namespace soundseek
