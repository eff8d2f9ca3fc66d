#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace soundseek {

/// The per-run random stream. All stochastic draws of a run go through one.
using Rng = std::mt19937_64;

/// Measurement noise: step ~ N(s, step_variance), DoA ~ vonMises(theta, doa_concentration).
struct NoiseModel {
  double step_variance = 0.01;
  double doa_concentration = 100.0;

  /// Throws std::invalid_argument unless both parameters are positive and finite.
  void validate() const;
};

/// Sufficient statistics of the step-length posterior.
///
/// While `prior_is_infinite` is set the estimator has seen no measurement:
/// `mean` is not meaningful and `uncertainty()` reports +inf.
struct GaussianEstimate {
  double mean = 0.0;
  double variance = 0.0;
  bool prior_is_infinite = true;
  double measurement_variance = 1.0;

  double uncertainty() const {
    return prior_is_infinite ? std::numeric_limits<double>::infinity() : variance;
  }
};

/// Sufficient statistics of the DoA posterior: circular mean and concentration K.
struct VonMisesEstimate {
  double mean = 0.0;
  double concentration = 0.0;
  double measurement_concentration = 1.0;

  /// K^-1, +inf at K = 0.
  double inverse_concentration() const {
    return concentration > 0.0 ? 1.0 / concentration : std::numeric_limits<double>::infinity();
  }
};

GaussianEstimate reset_gaussian(double measurement_variance);
VonMisesEstimate reset_vonmises(double measurement_concentration);

/// Product-of-Gaussians update. The first update after a reset adopts the
/// measurement with variance sigma_d^2. Throws on a non-finite measurement.
GaussianEstimate gaussian_update(const GaussianEstimate& est, double measurement);

/// Von Mises fusion of the prior with a measurement of concentration k_theta.
/// Throws on a non-finite measurement.
VonMisesEstimate vonmises_update(const VonMisesEstimate& est, double measurement);

/// Magnitude form sqrt(K^2 + k^2 + 2 K k cos(mu - theta)) of the concentration update.
double vonmises_concentration_magnitude_form(double prior_concentration, double prior_mean,
                                             double measurement_concentration, double measurement);

double sample_step(Rng& rng, double true_step, double step_variance);

/// Best-Fisher rejection sampler (wrapped Cauchy envelope). Result in (-pi, pi].
double sample_doa(Rng& rng, double true_doa, double concentration);

}  // namespace soundseek
