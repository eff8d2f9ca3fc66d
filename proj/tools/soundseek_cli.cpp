// soundseek: command-line harness for single runs and preset sweeps.
//
// Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "soundseek/config.hpp"
#include "soundseek/output.hpp"
#include "soundseek/simulation.hpp"
#include "soundseek/sweep.hpp"

namespace fs = std::filesystem;
using namespace soundseek;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::optional<std::string> scenario;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<double> duration;
  std::optional<std::string> emit_trajectories;
  std::optional<int> targets;
  std::string out = "results";
};

ScenarioConfig resolve_config(const CommonFlags& f, std::optional<ScenarioKind> forced) {
  std::optional<ScenarioKind> kind = forced;
  if (f.scenario) {
    const auto k = *f.scenario == "single" ? ScenarioKind::Single : ScenarioKind::Multi;
    if (kind && *kind != k) throw ConfigError("scenario", "conflicts with the selected table");
    kind = k;
  }
  ScenarioConfig c;
  if (f.config_path) {
    c = load_config(*f.config_path);
    if (kind && c.scenario != *kind) {
      throw ConfigError("scenario", "config file scenario does not match the command line");
    }
  } else {
    c = ScenarioConfig::defaults(kind.value_or(ScenarioKind::Single));
  }
  if (f.seed) c.seed = *f.seed;
  if (f.runs) c.runs = *f.runs;
  if (f.duration) c.duration = *f.duration;
  if (f.emit_trajectories) c.emit_trajectories = *f.emit_trajectories == "on";
  if (f.targets) {
    c.targets = *f.targets;
    c.sources.clear();
  }
  c.validate();
  return c;
}

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "Scenario config file (flat YAML)");
  app->add_option("--seed", f.seed, "Base random seed");
  app->add_option("--runs", f.runs, "Runs per experiment or per sweep cell")->check(CLI::PositiveNumber);
  app->add_option("--duration", f.duration, "Simulated horizon in seconds")->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--targets", f.targets, "Random target count (multi)")->check(CLI::PositiveNumber);
}

int run_command(const CommonFlags& f) {
  const ScenarioConfig config = resolve_config(f, std::nullopt);
  const fs::path out = f.out;
  for (int run = 0; run < config.runs; ++run) {
    const std::uint64_t seed =
        config.runs == 1 ? config.seed : derive_seed(config.seed, static_cast<std::uint64_t>(run));
    const auto metrics = run_scenario(config, seed);
    const fs::path dir = config.runs == 1 ? out : out / fmt::format("run_{:03}", run + 1);
    ScenarioConfig echoed = config;
    echoed.seed = seed;
    echoed.runs = 1;
    write_run_outputs(dir, echoed, metrics);
    if (metrics.scenario == ScenarioKind::Single) {
      std::cout << fmt::format("run {} seed {}: t_s = {}, final distance = {:.4f} m\n", run + 1, seed,
                               metrics.convergence_time ? fmt::format("{:.3f} s", *metrics.convergence_time)
                                                        : std::string("not converged"),
                               metrics.final_centroid_distance);
    } else {
      std::cout << fmt::format("run {} seed {}: {} of {} sources detected\n", run + 1, seed,
                               metrics.detection_count, metrics.sources.size());
    }
  }
  return 0;
}

int sweep_command(const CommonFlags& f, int table, unsigned threads) {
  const auto kind = table == 1 ? ScenarioKind::Single : ScenarioKind::Multi;
  const ScenarioConfig config = resolve_config(f, kind);
  const SweepOptions options{config.runs, config.seed, threads};
  const fs::path out = f.out;
  write_file_atomic(out / "effective_config.yaml", to_config_text(config));
  if (table == 1) {
    const auto cells =
        sweep_convergence(config, kConvergenceVariances, kConvergenceConcentrations, options);
    write_file_atomic(out / "table1.csv", convergence_table_csv(cells));
    write_file_atomic(out / "table1_grid.csv", convergence_grid_csv(cells));
    write_file_atomic(out / "table1_summary.json", convergence_summary_json(cells));
    std::cout << convergence_grid_csv(cells);
  } else {
    const auto rows = sweep_detections(config, kDetectionTargetCounts, options);
    write_file_atomic(out / "table2.csv", detection_table_csv(rows));
    write_file_atomic(out / "table2_summary.json", detection_summary_json(rows));
    std::cout << detection_table_csv(rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switching-mode multi-agent sound source seeking simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one scenario (optionally several seeded runs)");
  run->add_option("--scenario", run_flags.scenario, "single or multi")
      ->check(CLI::IsMember({"single", "multi"}));
  run->add_option("--emit-trajectories", run_flags.emit_trajectories, "on or off")
      ->check(CLI::IsMember({"on", "off"}));
  add_common(run, run_flags);

  CommonFlags sweep_flags;
  int table = 1;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a preset experiment grid");
  sweep->add_option("--table", table, "1: convergence time grid, 2: detection counts")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  sweep->add_option("--scenario", sweep_flags.scenario, "single or multi")
      ->check(CLI::IsMember({"single", "multi"}));
  sweep->add_option("--threads", threads, "Worker threads (0: all cores)");
  add_common(sweep, sweep_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return run_command(run_flags);
    return sweep_command(sweep_flags, table, threads);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
