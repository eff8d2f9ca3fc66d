#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "soundseek/config.hpp"
#include "soundseek/simulation.hpp"

namespace soundseek {

/// Seed of run `run_index` in every cell of a sweep. Cells share the seed of a
/// given run index, so cells differ only in their parameters.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_index);

struct SweepOptions {
  int runs = 1;
  std::uint64_t base_seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Reference grid and values of the convergence-time experiment (seconds).
inline constexpr std::array<double, 5> kConvergenceVariances = {0.01, 0.1, 1.0, 10.0, 100.0};
inline constexpr std::array<double, 3> kConvergenceConcentrations = {100.0, 10.0, 1.0};
inline constexpr std::array<std::array<double, 3>, 5> kReferenceConvergenceTimes = {{
    {251.662, 259.034, 382.876},
    {258.768, 259.077, 382.870},
    {340.709, 340.724, 382.850},
    {1050.764, 1050.770, 1050.794},
    {9250.778, 9250.773, 9250.756},
}};

// Reference target counts and average detections of the multi-source experiment.
inline constexpr std::array<int, 6> kDetectionTargetCounts = {3, 4, 5, 6, 7, 8};
inline constexpr std::array<double, 6> kReferenceDetections = {2.7, 3.6, 4.4, 4.5, 5.4, 6.4};

struct ConvergenceCell {
  double step_variance = 0.0;
  double doa_concentration = 0.0;
  std::vector<std::optional<double>> convergence_times;
  std::vector<std::optional<double>> convergence_times_excluding_settle;
  int converged_runs = 0;
  std::optional<double> mean_convergence_time;  // over converged runs
  std::optional<double> mean_convergence_time_excluding_settle;
  std::optional<double> reference_time;
};

struct DetectionRow {
  int targets = 0;
  std::vector<int> detections;
  double mean_detections = 0.0;
  std::optional<double> reference_detections;
};

/// Runs every (variance, concentration) cell `options.runs` times on the
/// single-source scenario `base`. Cells come back variance-major.
std::vector<ConvergenceCell> sweep_convergence(const ScenarioConfig& base,
                                               std::span<const double> variances,
                                               std::span<const double> concentrations,
                                               const SweepOptions& options);

/// Runs the multi-source scenario `base` for each target count.
std::vector<DetectionRow> sweep_detections(const ScenarioConfig& base,
                                           std::span<const int> target_counts,
                                           const SweepOptions& options);

}  // namespace soundseek
