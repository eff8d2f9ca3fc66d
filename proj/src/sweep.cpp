#include "soundseek/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace soundseek {

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_index) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = base_seed ^ (0x9e3779b97f4a7c15ULL * (run_index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          body(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

template <typename T>
std::optional<double> mean_of(const std::vector<std::optional<T>>& values) {
  double sum = 0.0;
  int n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

std::vector<ConvergenceCell> sweep_convergence(const ScenarioConfig& base,
                                               std::span<const double> variances,
                                               std::span<const double> concentrations,
                                               const SweepOptions& options) {
  std::vector<ConvergenceCell> cells;
  for (double v : variances) {
    for (double k : concentrations) {
      ConvergenceCell cell;
      cell.step_variance = v;
      cell.doa_concentration = k;
      cell.convergence_times.resize(options.runs);
      cell.convergence_times_excluding_settle.resize(options.runs);
      for (std::size_t a = 0; a < kConvergenceVariances.size(); ++a) {
        for (std::size_t b = 0; b < kConvergenceConcentrations.size(); ++b) {
          if (kConvergenceVariances[a] == v && kConvergenceConcentrations[b] == k) {
            cell.reference_time = kReferenceConvergenceTimes[a][b];
          }
        }
      }
      cells.push_back(std::move(cell));
    }
  }
  const auto runs = static_cast<std::size_t>(options.runs);
  parallel_for(cells.size() * runs, options.threads, [&](std::size_t job) {
    auto& cell = cells[job / runs];
    const std::size_t run = job % runs;
    ScenarioConfig config = base;
    config.noise = {cell.step_variance, cell.doa_concentration};
    config.emit_trajectories = false;
    const auto metrics = run_single_source(config, derive_seed(options.base_seed, run));
    cell.convergence_times[run] = metrics.convergence_time;
    cell.convergence_times_excluding_settle[run] = metrics.convergence_time_excluding_settle;
  });
  for (auto& cell : cells) {
    cell.converged_runs = static_cast<int>(std::count_if(
        cell.convergence_times.begin(), cell.convergence_times.end(),
        [](const auto& t) { return t.has_value(); }));
    cell.mean_convergence_time = mean_of(cell.convergence_times);
    cell.mean_convergence_time_excluding_settle = mean_of(cell.convergence_times_excluding_settle);
  }
  return cells;
}

std::vector<DetectionRow> sweep_detections(const ScenarioConfig& base,
                                           std::span<const int> target_counts,
                                           const SweepOptions& options) {
  std::vector<DetectionRow> rows;
  for (int n : target_counts) {
    DetectionRow row;
    row.targets = n;
    row.detections.resize(options.runs);
    for (std::size_t a = 0; a < kDetectionTargetCounts.size(); ++a) {
      if (kDetectionTargetCounts[a] == n) row.reference_detections = kReferenceDetections[a];
    }
    rows.push_back(std::move(row));
  }
  const auto runs = static_cast<std::size_t>(options.runs);
  parallel_for(rows.size() * runs, options.threads, [&](std::size_t job) {
    auto& row = rows[job / runs];
    const std::size_t run = job % runs;
    ScenarioConfig config = base;
    config.targets = row.targets;
    config.sources.clear();
    config.emit_trajectories = false;
    row.detections[run] = run_multi_source(config, derive_seed(options.base_seed, run)).detection_count;
  });
  for (auto& row : rows) {
    double sum = 0.0;
    for (int d : row.detections) sum += d;
    row.mean_detections = sum / static_cast<double>(row.detections.size());
  }
  return rows;
}

}  // namespace soundseek
