// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmv/io.hpp"
#include "mmv/metrics.hpp"
#include "mmv/scenarios.hpp"

namespace py = pybind11;

namespace {

mmv::LinearModel model_for(const mmv::InstanceDocument& doc, bool robust) {
  if (robust) {
    if (!doc.robust)
      throw mmv::InputError("robust requested but the instance has no eta");
    return mmv::build_robust(doc.to_robust());
  }
  return mmv::build_baseline(doc.instance);
}

py::dict metrics_dict(const mmv::SolutionMetrics& m) {
  py::dict d;
  d["total_doses"] = m.total_doses;
  d["temp_doses"] = m.temp_doses;
  d["P"] = m.temp_share_pct;
  d["D"] = m.duration_days;
  d["D_p"] = m.duration_by_group;
  d["doses_by_group"] = m.doses_by_group;
  d["T_p"] = m.temp_share_defined
                 ? py::cast(m.temp_group_share_pct)
                 : py::cast(std::vector<double>());
  d["G_p"] = m.temp_demand_pct;
  d["open_center_days"] = m.open_center_days;
  d["Q"] = m.coverage_q_pct;
  return d;
}

py::dict solution_dict(const mmv::LinearModel& model,
                       const mmv::PlanSolution& sol) {
  py::dict d;
  d["status"] = mmv::to_string(sol.status);
  d["objective"] = sol.objective;
  d["best_bound"] = sol.best_bound;
  d["gap"] = sol.gap;
  d["runtime_s"] = sol.runtime_s;
  d["nodes"] = sol.nodes;
  d["backend"] = sol.backend;
  py::dict values;
  for (const auto& [name, value] : sol.objective_values) values[name.c_str()] = value;
  d["objective_values"] = values;
  if (!sol.x.empty()) {
    d["x"] = sol.x;
    d["metrics"] = metrics_dict(mmv::compute_metrics(model, sol.x));
  }
  return d;
}

std::string generate_json(const std::string& scenario,
                          const std::vector<double>& supply,
                          std::optional<std::uint64_t> seed, int horizon,
                          double demand_scale, double robust_slack) {
  mmv::ScenarioConfig config;
  config.scenario = scenario;
  config.supply = supply;
  if (seed) {
    config.has_seed = true;
    config.seed = *seed;
  }
  config.horizon = horizon;
  config.demand_scale = demand_scale;
  mmv::InstanceDocument doc;
  doc.instance = mmv::generate(config);
  if (robust_slack >= 0.0) {
    doc.robust = true;
    doc.eta.assign(doc.instance.num_neighborhoods(),
                   std::vector<double>(doc.instance.num_groups(), 0.0));
    for (int l = 0; l < doc.instance.num_neighborhoods(); ++l)
      for (int p = 0; p < doc.instance.num_groups(); ++p)
        doc.eta[l][p] = robust_slack * doc.instance.demand[l][p];
  }
  return mmv::dump_instance(doc);
}

std::vector<std::string> validate_json(const std::string& text) {
  mmv::InstanceDocument doc = mmv::parse_instance(text);
  return doc.robust ? mmv::validate(doc.to_robust())
                    : mmv::validate(doc.instance);
}

py::dict solve_json(const std::string& text, double alpha,
                    const std::string& backend, double time_limit,
                    const std::vector<std::string>& restrict_ids, bool robust,
                    double gap, std::uint64_t seed) {
  mmv::InstanceDocument doc = mmv::parse_instance(text);
  for (const std::string& id : restrict_ids) {
    int p = doc.instance.group_index(id);
    if (p < 0) throw mmv::InputError("unknown group id: " + id);
    doc.instance.groups[p].temporary_only = true;
  }
  mmv::LinearModel model = model_for(doc, robust);
  mmv::Bounds bounds = mmv::compute_bounds(model, backend, time_limit);
  mmv::SolveRequest req;
  req.model = &model;
  req.blended = mmv::blend(model, bounds, alpha);
  req.time_limit_s = time_limit;
  req.gap_target = gap;
  req.seed = seed;
  mmv::PlanSolution sol = mmv::solve(req, backend);
  return solution_dict(model, sol);
}

py::list sweep_json(const std::string& text, std::vector<double> alphas,
                    const std::string& backend, double time_limit,
                    bool robust) {
  mmv::InstanceDocument doc = mmv::parse_instance(text);
  mmv::LinearModel model = model_for(doc, robust);
  if (alphas.empty()) alphas = mmv::default_alpha_grid();
  mmv::SweepResult result = mmv::sweep(model, alphas, backend, time_limit);
  py::list points;
  for (const mmv::SweepPoint& point : result.points) {
    py::dict d = solution_dict(model, point.solution);
    d["alpha"] = point.alpha;
    d["raw"] = point.raw;
    d["normalized"] = point.normalized;
    points.append(d);
  }
  return points;
}

double bound_json(const std::string& text) {
  mmv::InstanceDocument doc = mmv::parse_instance(text);
  return mmv::temp_share_lower_bound(doc.instance);
}

}  // namespace

PYBIND11_MODULE(_mmvplan, m) {
  m.doc() = "Vaccination campaign planning: scenario generators, the blended "
            "bi-objective solve, and campaign metrics.";
  py::register_exception<mmv::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<mmv::ModelError>(m, "ModelError", PyExc_RuntimeError);

  m.def("generate", &generate_json, py::arg("scenario"),
        py::arg("supply") = std::vector<double>(),
        py::arg("seed") = std::nullopt, py::arg("horizon") = -1,
        py::arg("demand_scale") = 1.0, py::arg("robust_slack") = -1.0,
        "Build a shipped scenario and return its instance document (JSON).");
  m.def("validate", &validate_json, py::arg("instance"),
        "List of problems in an instance document; empty when well formed.");
  m.def("solve", &solve_json, py::arg("instance"), py::arg("alpha"),
        py::arg("backend") = std::string(), py::arg("time_limit") = 0.0,
        py::arg("restrict_groups") = std::vector<std::string>(),
        py::arg("robust") = false, py::arg("gap") = 0.0, py::arg("seed") = 0,
        "Solve the blended model for one alpha; returns status, objectives, "
        "and campaign metrics.");
  m.def("sweep", &sweep_json, py::arg("instance"),
        py::arg("alphas") = std::vector<double>(),
        py::arg("backend") = std::string(), py::arg("time_limit") = 0.0,
        py::arg("robust") = false,
        "Solve across a grid of alphas; returns one record per point.");
  m.def("priority_weight",
        py::overload_cast<double, double, int>(&mmv::priority_weight),
        py::arg("risk"), py::arg("eps"), py::arg("day"));
  m.def("temp_share_lower_bound", &bound_json, py::arg("instance"),
        "Lower bound, in percent, on the temporary-center share of doses.");
}
