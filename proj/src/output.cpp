#include "soundseek/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace soundseek {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : ""; }

std::string event_payload(const Event& e) {
  switch (e.kind) {
    case EventKind::ListenStart:
      if (std::isnan(e.step_target)) return "";
      return fmt::format("step_target={};traveled={}", e.step_target, e.traveled);
    case EventKind::MoveStart:
      return fmt::format("mu_s={};mu_theta={}", e.mu_s, e.mu_theta);
    case EventKind::Detection:
      return fmt::format("mu_s={};area_id={}", e.mu_s, e.area_id);
  }
  return "";
}

}  // namespace

std::string trajectory_csv(const RunMetrics& m) {
  std::string out = "time_s,agent_id,x_m,y_m,mode,mu_s_m,mu_theta_rad,P,K\n";
  for (const auto& s : m.trajectory) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", s.time, s.agent_id, s.position.x(),
                       s.position.y(), to_string(s.mode), s.mu_s, s.mu_theta, s.variance,
                       s.concentration);
  }
  return out;
}

std::string events_csv(const RunMetrics& m) {
  std::string out = "time_s,agent_id,event,x_m,y_m,payload\n";
  for (const auto& e : m.events) {
    out += fmt::format("{},{},{},{},{},{}\n", e.time, e.agent_id, to_string(e.kind), e.position.x(),
                       e.position.y(), event_payload(e));
  }
  return out;
}

std::string centroid_distance_csv(const RunMetrics& m) {
  std::string out = "time_s,centroid_distance_m\n";
  for (const auto& [t, d] : m.centroid_distance) out += fmt::format("{},{}\n", t, d);
  return out;
}

std::string detection_map_csv(const RunMetrics& m) {
  std::string out = "kind,id,x_m,y_m,radius_m\n";
  for (std::size_t k = 0; k < m.sources.size(); ++k) {
    out += fmt::format("source,{},{},{},\n", k + 1, m.sources[k].position.x(),
                       m.sources[k].position.y());
  }
  for (std::size_t k = 0; k < m.detection_points.size(); ++k) {
    out += fmt::format("detection,{},{},{},\n", k + 1, m.detection_points[k].x(),
                       m.detection_points[k].y());
  }
  for (std::size_t k = 0; k < m.explored_areas.size(); ++k) {
    const auto& a = m.explored_areas[k];
    out += fmt::format("area,{},{},{},{}\n", k + 1, a.center.x(), a.center.y(), a.radius);
  }
  return out;
}

std::string metrics_json(const RunMetrics& m) {
  json j;
  j["scenario"] = to_string(m.scenario);
  j["seed"] = m.seed;
  j["steps"] = m.steps;
  j["duration_s"] = m.duration;
  j["settle_time_total_s"] = m.settle_time_total;
  std::map<std::string, int> counts;
  for (const auto& e : m.events) ++counts[to_string(e.kind)];
  j["event_counts"] = counts;
  if (m.scenario == ScenarioKind::Single) {
    j["t_s"] = optional_number(m.convergence_time);
    j["t_s_excluding_settle"] = optional_number(m.convergence_time_excluding_settle);
    j["converged"] = m.convergence_time.has_value();
    j["final_centroid_distance_m"] = finite_or_null(m.final_centroid_distance);
    j["max_bearing_error"] = m.max_bearing_error;
  } else {
    j["detection_count"] = m.detection_count;
    j["targets"] = m.sources.size();
    j["detection_events"] = m.detection_points.size();
    j["explored_areas"] = m.explored_areas.size();
  }
  json src = json::array();
  for (const auto& s : m.sources) src.push_back({s.position.x(), s.position.y()});
  j["sources"] = src;
  json fin = json::array();
  for (const auto& p : m.final_positions) fin.push_back({p.x(), p.y()});
  j["final_positions"] = fin;
  return j.dump(2) + "\n";
}

std::string convergence_table_csv(const std::vector<ConvergenceCell>& cells) {
  std::string out =
      "step_variance,doa_concentration,runs,converged_runs,mean_t_s,mean_t_s_excluding_settle,"
      "reference_t_s\n";
  for (const auto& c : cells) {
    out += fmt::format("{},{},{},{},{},{},{}\n", c.step_variance, c.doa_concentration,
                       c.convergence_times.size(), c.converged_runs, cell(c.mean_convergence_time),
                       cell(c.mean_convergence_time_excluding_settle), cell(c.reference_time));
  }
  return out;
}

std::string convergence_grid_csv(const std::vector<ConvergenceCell>& cells) {
  std::vector<double> variances;
  std::vector<double> concentrations;
  for (const auto& c : cells) {
    if (std::find(variances.begin(), variances.end(), c.step_variance) == variances.end()) {
      variances.push_back(c.step_variance);
    }
    if (std::find(concentrations.begin(), concentrations.end(), c.doa_concentration) ==
        concentrations.end()) {
      concentrations.push_back(c.doa_concentration);
    }
  }
  std::string out = "step_variance";
  for (double k : concentrations) out += fmt::format(",k_theta_{}", k);
  out += "\n";
  for (double v : variances) {
    out += fmt::format("{}", v);
    for (double k : concentrations) {
      std::optional<double> value;
      for (const auto& c : cells) {
        if (c.step_variance == v && c.doa_concentration == k) value = c.mean_convergence_time;
      }
      out += "," + cell(value);
    }
    out += "\n";
  }
  return out;
}

std::string detection_table_csv(const std::vector<DetectionRow>& rows) {
  std::string out = "targets,runs,mean_detections,min_detections,max_detections,reference_mean_detections\n";
  for (const auto& r : rows) {
    const auto [lo, hi] = std::minmax_element(r.detections.begin(), r.detections.end());
    out += fmt::format("{},{},{},{},{},{}\n", r.targets, r.detections.size(), r.mean_detections,
                       r.detections.empty() ? 0 : *lo, r.detections.empty() ? 0 : *hi,
                       cell(r.reference_detections));
  }
  return out;
}

std::string convergence_summary_json(const std::vector<ConvergenceCell>& cells) {
  json arr = json::array();
  for (const auto& c : cells) {
    json runs = json::array();
    for (const auto& t : c.convergence_times) runs.push_back(optional_number(t));
    arr.push_back({{"step_variance", c.step_variance},
                   {"doa_concentration", c.doa_concentration},
                   {"t_s", runs},
                   {"mean_t_s", optional_number(c.mean_convergence_time)},
                   {"mean_t_s_excluding_settle", optional_number(c.mean_convergence_time_excluding_settle)},
                   {"reference_t_s", optional_number(c.reference_time)}});
  }
  return json{{"table", 1}, {"cells", arr}}.dump(2) + "\n";
}

std::string detection_summary_json(const std::vector<DetectionRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"targets", r.targets},
                   {"detections", r.detections},
                   {"mean_detections", r.mean_detections},
                   {"reference_mean_detections", optional_number(r.reference_detections)}});
  }
  return json{{"table", 2}, {"rows", arr}}.dump(2) + "\n";
}

void write_run_outputs(const fs::path& dir, const ScenarioConfig& config, const RunMetrics& m) {
  write_file_atomic(dir / "effective_config.yaml", to_config_text(config));
  write_file_atomic(dir / "metrics.json", metrics_json(m));
  write_file_atomic(dir / "events.csv", events_csv(m));
  if (m.scenario == ScenarioKind::Single) {
    write_file_atomic(dir / "centroid_distance.csv", centroid_distance_csv(m));
  } else {
    write_file_atomic(dir / "detection_map.csv", detection_map_csv(m));
  }
  if (config.emit_trajectories) write_file_atomic(dir / "trajectory.csv", trajectory_csv(m));
}

}  // namespace soundseek
