// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmv/io.hpp"
#include "mmv/metrics.hpp"
#include "mmv/scenarios.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNoIncumbent = 3;

struct CommonOpts {
  std::string backend;
  double time_limit = 0.0;  // 0 keeps the engine default
  double gap = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> solver_opts;
};

void fill_request(mmv::SolveRequest* req, const CommonOpts& opts) {
  req->time_limit_s = opts.time_limit;
  req->gap_target = opts.gap;
  req->seed = opts.seed;
  for (const std::string& kv : opts.solver_opts) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw mmv::InputError("solver option must look like key=value: " + kv);
    req->options.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

mmv::LinearModel build_model(const mmv::InstanceDocument& doc, bool robust) {
  if (robust) {
    if (!doc.robust)
      throw mmv::InputError("--robust given but the instance has no eta block");
    return mmv::build_robust(doc.to_robust());
  }
  return mmv::build_baseline(doc.instance);
}

void restrict_groups(mmv::InstanceDocument* doc,
                     const std::vector<std::string>& ids) {
  for (const std::string& id : ids) {
    int p = doc->instance.group_index(id);
    if (p < 0) throw mmv::InputError("unknown group id: " + id);
    doc->instance.groups[p].temporary_only = true;
  }
}

int status_exit(const mmv::PlanSolution& sol) {
  if (sol.status == mmv::SolveStatus::Infeasible) {
    std::cerr << "error: model is infeasible\n";
    return kExitInfeasible;
  }
  if (sol.status == mmv::SolveStatus::NoSolution) {
    std::cerr << "error: no incumbent within the time limit\n";
    return kExitNoIncumbent;
  }
  return kExitOk;
}

int run_validate(const std::string& path) {
  mmv::InstanceDocument doc = mmv::load_instance(path);
  std::vector<std::string> violations =
      doc.robust ? mmv::validate(doc.to_robust()) : mmv::validate(doc.instance);
  if (!violations.empty()) {
    for (const std::string& v : violations) std::cerr << "error: " << v << "\n";
    return kExitInput;
  }
  const mmv::Instance& inst = doc.instance;
  std::cout << inst.name << ": " << inst.num_zones() << " zones, "
            << inst.num_neighborhoods() << " neighborhoods, "
            << inst.num_groups() << " groups, " << inst.num_permanent() << "+"
            << inst.num_temporary() << " centers, horizon " << inst.horizon
            << (doc.robust ? ", robust" : "") << "\n";
  return kExitOk;
}

int run_bounds(const std::string& path, bool robust, const CommonOpts& opts,
               const std::string& out) {
  mmv::InstanceDocument doc = mmv::load_instance(path);
  mmv::LinearModel model = build_model(doc, robust);
  mmv::Bounds bounds =
      mmv::compute_bounds(model, opts.backend, opts.time_limit);
  json payload = json::array();
  for (const mmv::ObjectiveBounds& b : bounds.per_objective)
    payload.push_back({{"name", b.name}, {"best", b.best}, {"worst", b.worst}});
  mmv::write_file_atomic(out, json{{"objectives", payload}}.dump(2) + "\n");
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

int run_solve(const std::string& path, double alpha, bool robust,
              const std::vector<std::string>& restrict_ids,
              const CommonOpts& opts, const std::string& out_solution,
              const std::string& out_metrics) {
  mmv::InstanceDocument doc = mmv::load_instance(path);
  restrict_groups(&doc, restrict_ids);
  mmv::LinearModel model = build_model(doc, robust);
  mmv::Bounds bounds =
      mmv::compute_bounds(model, opts.backend, opts.time_limit);

  mmv::SolveRequest req;
  req.model = &model;
  req.blended = mmv::blend(model, bounds, alpha);
  fill_request(&req, opts);
  mmv::PlanSolution sol = mmv::solve(req, opts.backend);
  if (int code = status_exit(sol); code != kExitOk) return code;

  mmv::SolutionDocument result;
  result.instance = doc;
  result.alpha = alpha;
  result.backend = sol.backend;
  result.status = mmv::to_string(sol.status);
  result.objective = sol.objective;
  result.gap = sol.gap;
  result.runtime_s = sol.runtime_s;
  result.objective_values = sol.objective_values;
  result.x = sol.x;
  mmv::save_solution(result, out_solution);

  mmv::SweepPoint point;
  point.alpha = alpha;
  point.solution = sol;
  for (std::size_t k = 0; k < model.objectives.size(); ++k) {
    point.raw.push_back(sol.objective_values[k].second);
    const mmv::ObjectiveBounds& b = bounds.per_objective[k];
    bool maximized = model.objectives[k].sense == mmv::ObjSense::Max;
    double span = maximized ? b.best - b.worst : b.worst - b.best;
    double anchor = maximized ? b.worst : b.best;
    point.normalized.push_back(span > 0.0 ? (point.raw[k] - anchor) / span
                                          : 0.0);
  }
  mmv::SweepResult single;
  single.bounds = bounds;
  single.points.push_back(point);
  std::ostringstream csv;
  mmv::write_sweep_csv(model, single, csv);
  mmv::write_file_atomic(out_metrics, csv.str());

  mmv::SolutionMetrics m = mmv::compute_metrics(model, sol.x);
  std::cout << "status " << result.status << " Z " << sol.objective << " gap "
            << sol.gap << " P " << m.temp_share_pct << "% D "
            << m.duration_days << "\n";
  std::cout << "wrote " << out_solution << " " << out_metrics << "\n";
  return kExitOk;
}

int run_sweep(const std::string& path, std::vector<double> alphas, bool robust,
              const CommonOpts& opts, const std::string& out) {
  mmv::InstanceDocument doc = mmv::load_instance(path);
  mmv::LinearModel model = build_model(doc, robust);
  if (alphas.empty()) alphas = mmv::default_alpha_grid();
  mmv::SolveRequest proto;
  fill_request(&proto, opts);
  std::int64_t node_limit = 0;
  for (const auto& [key, value] : proto.options)
    if (key == "node_limit") node_limit = std::stoll(value);
  mmv::SweepResult result = mmv::sweep(model, alphas, opts.backend,
                                       opts.time_limit, opts.gap, node_limit);
  std::ostringstream csv;
  mmv::write_sweep_csv(model, result, csv);
  mmv::write_file_atomic(out, csv.str());
  std::cout << "wrote " << out << " (" << result.points.size() << " points)\n";
  return kExitOk;
}

int run_report(const std::string& path, const std::string& center,
               int day_from, int day_to, const std::string& out_dir) {
  mmv::SolutionDocument doc = mmv::load_solution(path);
  mmv::LinearModel model = build_model(doc.instance, doc.instance.robust);
  const mmv::Instance& inst = doc.instance.instance;
  std::string prefix = out_dir.empty() ? "" : out_dir + "/";

  std::ostringstream schedule;
  mmv::write_schedule_csv(model, doc.x, schedule);
  mmv::write_file_atomic(prefix + "schedule.csv", schedule.str());
  std::ostringstream cumulative;
  mmv::write_cumulative_csv(model, doc.x, cumulative);
  mmv::write_file_atomic(prefix + "cumulative.csv", cumulative.str());

  int lo = day_from > 0 ? day_from : 1;
  int hi = day_to > 0 ? day_to : inst.horizon;
  std::vector<std::string> centers;
  if (!center.empty()) {
    centers.push_back(center);
  } else {
    for (const mmv::Center& c : inst.temporary) centers.push_back(c.id);
  }
  for (const std::string& id : centers) {
    mmv::ScheduleTable table =
        mmv::schedule_table(model, doc.x, inst, id, lo, hi);
    std::ostringstream csv;
    mmv::write_center_schedule_csv(table, inst, csv);
    mmv::write_file_atomic(prefix + "center_" + id + ".csv", csv.str());
  }
  std::cout << "wrote " << centers.size() + 2 << " reports to "
            << (out_dir.empty() ? "." : out_dir) << "\n";
  return kExitOk;
}

int run_gen(const mmv::ScenarioConfig& config, double robust_slack,
            const std::string& out) {
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
  std::vector<std::string> violations =
      doc.robust ? mmv::validate(doc.to_robust()) : mmv::validate(doc.instance);
  if (!violations.empty())
    throw mmv::ModelError("generated instance is invalid: " + violations.front());
  mmv::save_instance(doc, out);
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planner for single-dose vaccination campaigns with permanent "
               "and temporary centers"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string instance_path, solution_path, out, out_dir, center;
  std::string bounds_out = "bounds.json";
  std::string solve_out = "solution.json";
  std::string sweep_out = "sweep.csv";
  std::string out_metrics = "metrics.csv";
  std::vector<std::string> restrict_ids;
  std::vector<double> alphas;
  double alpha = 0.0, robust_slack = -1.0;
  bool robust = false;
  int day_from = 0, day_to = 0;
  mmv::ScenarioConfig config;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--backend", opts.backend, "Solver backend (bnb, oracle)");
    cmd->add_option("--time-limit", opts.time_limit, "Seconds per solve");
    cmd->add_option("--solver-opt", opts.solver_opts,
                    "Backend tuning key=value (repeatable)");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("instance", instance_path)->required();

  CLI::App* bounds = app.add_subcommand("bounds", "Payoff table bounds");
  bounds->add_option("instance", instance_path)->required();
  bounds->add_flag("--robust", robust, "Use the robust model");
  bounds->add_option("--out", bounds_out, "Output file");
  add_common(bounds);

  CLI::App* solve = app.add_subcommand("solve", "Solve one blended model");
  solve->add_option("instance", instance_path)->required();
  solve->add_option("--alpha", alpha, "Blend weight in [0,1]")->required();
  solve->add_option("--restrict-groups", restrict_ids,
                    "Groups forced out of permanent centers")
      ->delimiter(',');
  solve->add_flag("--robust", robust, "Use the robust model");
  solve->add_option("--gap", opts.gap, "Relative gap target");
  solve->add_option("--seed", opts.seed, "Deterministic seed");
  solve->add_option("--out", solve_out, "Solution file");
  solve->add_option("--metrics", out_metrics, "Metrics CSV");
  add_common(solve);

  CLI::App* sweep = app.add_subcommand("sweep", "Trace the trade-off curve");
  sweep->add_option("instance", instance_path)->required();
  sweep->add_option("--alphas", alphas, "Blend weights")->delimiter(',');
  sweep->add_flag("--robust", robust, "Use the robust model");
  sweep->add_option("--gap", opts.gap, "Relative gap target");
  sweep->add_option("--out", sweep_out, "Sweep CSV");
  add_common(sweep);

  CLI::App* report = app.add_subcommand("report", "Schedules from a solution");
  report->add_option("solution", solution_path)->required();
  report->add_option("--center", center, "Only this center id");
  report->add_option("--from", day_from, "First day");
  report->add_option("--to", day_to, "Last day");
  report->add_option("--out-dir", out_dir, "Output directory");

  CLI::App* gen = app.add_subcommand("gen", "Generate a shipped scenario");
  gen->add_option("scenario", config.scenario, "illustrative, s1, or s2")
      ->required();
  gen->add_option("--out", out, "Instance file")->required();
  gen->add_option("--at", config.supply,
                  "Daily vaccine supply (one value or one per day)")
      ->delimiter(',');
  auto* seed_opt = gen->add_option("--seed", config.seed, "Demand split seed");
  gen->add_option("--horizon", config.horizon, "Days in the campaign");
  gen->add_option("--mc", config.temp_center_cost, "Temporary center cost");
  gen->add_option("--temp-count", config.temp_count, "Temporary center count");
  gen->add_option("--temp-capacity", config.temp_capacity,
                  "Temporary center daily capacity");
  gen->add_option("--perm-capacity", config.perm_capacity,
                  "Permanent center capacities")
      ->delimiter(',');
  gen->add_option("--demand-scale", config.demand_scale,
                  "Scale factor on total demand");
  gen->add_option("--robust-slack", robust_slack,
                  "Emit a robust instance with eta = slack * demand");

  try {
    app.parse(argc, argv);
    config.has_seed = seed_opt->count() > 0;
    if (validate->parsed()) return run_validate(instance_path);
    if (bounds->parsed()) return run_bounds(instance_path, robust, opts, bounds_out);
    if (solve->parsed())
      return run_solve(instance_path, alpha, robust, restrict_ids, opts,
                       solve_out, out_metrics);
    if (sweep->parsed()) return run_sweep(instance_path, alphas, robust, opts, sweep_out);
    if (report->parsed())
      return run_report(solution_path, center, day_from, day_to, out_dir);
    if (gen->parsed()) return run_gen(config, robust_slack, out);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const mmv::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const mmv::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const mmv::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoIncumbent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
