#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "soundseek/config.hpp"
#include "soundseek/simulation.hpp"
#include "soundseek/sweep.hpp"

namespace soundseek {

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// CSV writers. Every table starts with a header row.
std::string trajectory_csv(const RunMetrics& metrics);       // time_s,agent_id,x_m,y_m,mode,mu_s_m,mu_theta_rad,P,K
std::string events_csv(const RunMetrics& metrics);           // time_s,agent_id,event,x_m,y_m,payload
std::string centroid_distance_csv(const RunMetrics& metrics);  // time_s,centroid_distance_m
std::string detection_map_csv(const RunMetrics& metrics);    // kind,id,x_m,y_m,radius_m

std::string metrics_json(const RunMetrics& metrics);

std::string convergence_table_csv(const std::vector<ConvergenceCell>& cells);
/// Variance rows by concentration columns (mean t_s).
std::string convergence_grid_csv(const std::vector<ConvergenceCell>& cells);
std::string detection_table_csv(const std::vector<DetectionRow>& rows);

std::string convergence_summary_json(const std::vector<ConvergenceCell>& cells);
std::string detection_summary_json(const std::vector<DetectionRow>& rows);

/// Writes metrics.json, events.csv, effective_config.yaml and the scenario
/// specific series (and trajectory.csv when enabled) into `dir`.
void write_run_outputs(const std::filesystem::path& dir, const ScenarioConfig& config,
                       const RunMetrics& metrics);

}  // namespace soundseek
