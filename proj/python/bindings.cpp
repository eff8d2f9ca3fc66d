#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "soundseek/acoustics.hpp"
#include "soundseek/config.hpp"
#include "soundseek/estimation.hpp"
#include "soundseek/exploration.hpp"
#include "soundseek/formation.hpp"
#include "soundseek/output.hpp"
#include "soundseek/simulation.hpp"
#include "soundseek/supervisor.hpp"
#include "soundseek/sweep.hpp"

namespace py = pybind11;
using namespace soundseek;

namespace {

py::object optional_float(const std::optional<double>& v) {
  return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::dict event_dict(const Event& e) {
  py::dict d;
  d["time"] = e.time;
  d["agent_id"] = e.agent_id;
  d["kind"] = to_string(e.kind);
  d["position"] = e.position;
  d["step_target"] = e.step_target;
  d["traveled"] = e.traveled;
  d["mu_s"] = e.mu_s;
  d["mu_theta"] = e.mu_theta;
  d["area_id"] = e.area_id;
  return d;
}

py::dict metrics_dict(const RunMetrics& m) {
  py::dict d;
  d["scenario"] = to_string(m.scenario);
  d["seed"] = m.seed;
  d["steps"] = m.steps;
  d["duration"] = m.duration;
  d["convergence_time"] = optional_float(m.convergence_time);
  d["convergence_time_excluding_settle"] = optional_float(m.convergence_time_excluding_settle);
  d["settle_time_total"] = m.settle_time_total;
  d["final_centroid_distance"] = m.final_centroid_distance;
  d["max_bearing_error"] = m.max_bearing_error;
  d["centroid_distance"] = m.centroid_distance;
  d["detection_count"] = m.detection_count;
  d["detection_points"] = m.detection_points;
  py::list areas;
  for (const auto& a : m.explored_areas) areas.append(py::make_tuple(a.center, a.radius));
  d["explored_areas"] = areas;
  py::list sources;
  for (const auto& s : m.sources) sources.append(py::make_tuple(s.position, s.power));
  d["sources"] = sources;
  d["final_positions"] = m.final_positions;
  py::list events;
  for (const auto& e : m.events) events.append(event_dict(e));
  d["events"] = events;
  d["metrics_json"] = metrics_json(m);
  return d;
}

AcousticWorld make_world(const std::vector<std::pair<Vec2, double>>& sources) {
  std::vector<SoundSource> out;
  for (const auto& [p, w] : sources) out.push_back({p, w});
  return AcousticWorld(std::move(out));
}

ScenarioKind kind_from(const std::string& s) {
  if (s == "single") return ScenarioKind::Single;
  if (s == "multi") return ScenarioKind::Multi;
  throw py::value_error("scenario must be 'single' or 'multi'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Acoustic source seeking with switching listening and movement phases.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateFormation>(m, "DegenerateFormation", PyExc_ValueError);

  // Acoustics
  m.def("intensity_at",
        [](const std::vector<std::pair<Vec2, double>>& sources, const Vec2& point) {
          return make_world(sources).intensity_at(point);
        },
        py::arg("sources"), py::arg("point"),
        "Total intensity at `point` for a list of (position, power) sources.");
  m.def("microphone_positions",
        [](const Vec2& center, double radius) { return microphone_positions({center, radius}); },
        py::arg("center"), py::arg("radius") = 0.1);
  m.def("array_intensities",
        [](const std::vector<std::pair<Vec2, double>>& sources, const Vec2& center, double radius) {
          return array_intensities(make_world(sources), {center, radius});
        },
        py::arg("sources"), py::arg("center"), py::arg("radius") = 0.1);
  m.def("omni_intensity",
        [](const std::vector<std::pair<Vec2, double>>& sources, const Vec2& center, double radius) {
          return omni_intensity(make_world(sources), {center, radius});
        },
        py::arg("sources"), py::arg("center"), py::arg("radius") = 0.1);

  // Estimation
  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("sample_step", [](Rng& r, double s, double var) { return sample_step(r, s, var); },
           py::arg("true_step"), py::arg("variance"))
      .def("sample_doa", [](Rng& r, double th, double k) { return sample_doa(r, th, k); },
           py::arg("true_doa"), py::arg("concentration"));

  py::class_<GaussianEstimate>(m, "GaussianEstimate")
      .def_readonly("mean", &GaussianEstimate::mean)
      .def_readonly("variance", &GaussianEstimate::variance)
      .def_readonly("prior_is_infinite", &GaussianEstimate::prior_is_infinite)
      .def_readonly("measurement_variance", &GaussianEstimate::measurement_variance)
      .def_property_readonly("uncertainty", &GaussianEstimate::uncertainty)
      .def("update", &gaussian_update, py::arg("measurement"));
  py::class_<VonMisesEstimate>(m, "VonMisesEstimate")
      .def(py::init([](double mean, double concentration, double measurement_concentration) {
             return VonMisesEstimate{mean, concentration, measurement_concentration};
           }),
           py::arg("mean"), py::arg("concentration"), py::arg("measurement_concentration"))
      .def_readonly("mean", &VonMisesEstimate::mean)
      .def_readonly("concentration", &VonMisesEstimate::concentration)
      .def_readonly("measurement_concentration", &VonMisesEstimate::measurement_concentration)
      .def_property_readonly("inverse_concentration", &VonMisesEstimate::inverse_concentration)
      .def("update", &vonmises_update, py::arg("measurement"));
  m.def("reset_gaussian", &reset_gaussian, py::arg("measurement_variance"));
  m.def("reset_vonmises", &reset_vonmises, py::arg("measurement_concentration"));
  m.def("vonmises_concentration_magnitude_form", &vonmises_concentration_magnitude_form,
        py::arg("prior_concentration"), py::arg("prior_mean"), py::arg("measurement_concentration"),
        py::arg("measurement"));

  // Formation
  m.def("bearing", &bearing, py::arg("p_i"), py::arg("p_j"));
  m.def("orthogonal_projector", &orthogonal_projector, py::arg("b"));
  m.def("formation_doa",
        [](const std::vector<double>& intensities, const std::vector<Vec2>& positions,
           const std::vector<std::pair<int, int>>& edges) {
          std::vector<Edge> es;
          for (const auto& [i, j] : edges) es.push_back({i, j});
          return formation_doa(intensities, positions, es);
        },
        py::arg("intensities"), py::arg("positions"), py::arg("edges"),
        "Ascent direction from zero-based (i, j) agent pairs; None without signal.");
  m.def("formation_step",
        [](const std::vector<double>& intensities, double alpha) {
          return formation_step(intensities, alpha);
        },
        py::arg("intensities"), py::arg("alpha") = 1e6);

  // Exploration
  m.def("array_doa", &array_doa, py::arg("intensities"), py::arg("positions"));
  m.def("array_step", &array_step, py::arg("intensities"), py::arg("beta"));
  py::class_<ExploredAreaRegistry>(m, "ExploredAreaRegistry")
      .def(py::init<>())
      .def("__len__", &ExploredAreaRegistry::size)
      .def_property_readonly("areas",
                             [](const ExploredAreaRegistry& r) {
                               py::list out;
                               for (const auto& a : r.areas()) out.append(py::make_tuple(a.center, a.radius));
                               return out;
                             })
      .def("containing_area", &ExploredAreaRegistry::containing_area, py::arg("point"))
      .def("register_detection",
           [](ExploredAreaRegistry& r, const Vec2& p) { return r.register_detection(p, {}); },
           py::arg("point"));
  m.def("score_detections",
        [](const std::vector<Vec2>& detections, const std::vector<Vec2>& sources, double radius) {
          std::vector<SoundSource> s;
          for (const auto& p : sources) s.push_back({p, 1.0});
          return score_detections(detections, s, radius);
        },
        py::arg("detections"), py::arg("sources"), py::arg("scoring_radius") = 1.5);

  // Configuration and runs
  py::class_<ScenarioConfig>(m, "Config")
      .def_static("defaults", [](const std::string& s) { return ScenarioConfig::defaults(kind_from(s)); },
                  py::arg("scenario"))
      .def_static("parse", &parse_config, py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def("validate", &ScenarioConfig::validate)
      .def("text", &to_config_text)
      .def_property_readonly("scenario", [](const ScenarioConfig& c) { return to_string(c.scenario); })
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("runs", &ScenarioConfig::runs)
      .def_readwrite("duration", &ScenarioConfig::duration)
      .def_readwrite("targets", &ScenarioConfig::targets)
      .def_readwrite("sources", &ScenarioConfig::sources)
      .def_readwrite("agent_positions", &ScenarioConfig::agent_positions)
      .def_readwrite("emit_trajectories", &ScenarioConfig::emit_trajectories)
      .def_property(
          "step_variance", [](const ScenarioConfig& c) { return c.noise.step_variance; },
          [](ScenarioConfig& c, double v) { c.noise.step_variance = v; })
      .def_property(
          "doa_concentration", [](const ScenarioConfig& c) { return c.noise.doa_concentration; },
          [](ScenarioConfig& c, double v) { c.noise.doa_concentration = v; });

  m.def("run",
        [](const ScenarioConfig& c, std::optional<std::uint64_t> seed) {
          RunMetrics metrics;
          {
            py::gil_scoped_release release;
            metrics = run_scenario(c, seed.value_or(c.seed));
          }
          return metrics_dict(metrics);
        },
        py::arg("config"), py::arg("seed") = py::none(),
        "Runs one scenario and returns its metrics as a dict.");

  m.def("derive_seed", &derive_seed, py::arg("base_seed"), py::arg("run_index"));
  m.def("sweep_detections",
        [](const ScenarioConfig& base, const std::vector<int>& targets, int runs,
           std::uint64_t base_seed, unsigned threads) {
          std::vector<DetectionRow> rows;
          {
            py::gil_scoped_release release;
            rows = sweep_detections(base, targets, {runs, base_seed, threads});
          }
          py::list out;
          for (const auto& r : rows) {
            py::dict d;
            d["targets"] = r.targets;
            d["detections"] = r.detections;
            d["mean_detections"] = r.mean_detections;
            d["reference_detections"] = optional_float(r.reference_detections);
            out.append(d);
          }
          return out;
        },
        py::arg("base"), py::arg("targets"), py::arg("runs") = 10, py::arg("base_seed") = 1,
        py::arg("threads") = 0);
  m.def("sweep_convergence",
        [](const ScenarioConfig& base, const std::vector<double>& variances,
           const std::vector<double>& concentrations, int runs, std::uint64_t base_seed,
           unsigned threads) {
          std::vector<ConvergenceCell> cells;
          {
            py::gil_scoped_release release;
            cells = sweep_convergence(base, variances, concentrations, {runs, base_seed, threads});
          }
          py::list out;
          for (const auto& c : cells) {
            py::dict d;
            d["step_variance"] = c.step_variance;
            d["doa_concentration"] = c.doa_concentration;
            d["convergence_times"] = c.convergence_times;
            d["converged_runs"] = c.converged_runs;
            d["mean_convergence_time"] = optional_float(c.mean_convergence_time);
            d["reference_time"] = optional_float(c.reference_time);
            out.append(d);
          }
          return out;
        },
        py::arg("base"), py::arg("variances"), py::arg("concentrations"), py::arg("runs") = 1,
        py::arg("base_seed") = 1, py::arg("threads") = 0);
}
