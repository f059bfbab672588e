// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>

#include "mmv/scalarization.hpp"

namespace mmv {
namespace {

Objective negated(const Objective& obj) {
  Objective out = obj;
  for (double& c : out.coeffs) c = -c;
  out.offset = -out.offset;
  out.sense = ObjSense::Min;
  out.name = "-" + obj.name;
  return out;
}

// Payoff anchors run under a deterministic evaluation cap so the bounds, and
// with them every normalized blend, reproduce exactly across runs.
constexpr std::int64_t kPayoffNodeCap = 500;

double run_solve(const LinearModel& model, Objective blended,
                 const std::string& backend, double time_limit_s,
                 std::vector<std::pair<int, double>> fixes,
                 const char* what) {
  SolveRequest req;
  req.model = &model;
  req.blended = std::move(blended);
  req.time_limit_s = time_limit_s;
  req.node_limit = kPayoffNodeCap;
  req.objective_fixes = std::move(fixes);
  PlanSolution sol = solve(req, backend);
  if (sol.status == SolveStatus::Infeasible)
    throw InfeasibleError(std::string("payoff computation infeasible: ") +
                          what);
  if (sol.status == SolveStatus::NoSolution)
    throw BudgetError(std::string("payoff computation hit the time limit: ") +
                      what);
  return sol.objective;
}

double span_floor(double best, double worst) {
  return 1e-9 * std::max({1.0, std::abs(best), std::abs(worst)});
}

}  // namespace

std::vector<double> default_alpha_grid() {
  return {0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.92, 0.94, 0.96, 0.98, 1.0};
}

Bounds compute_bounds(const LinearModel& model, const std::string& backend,
                      double time_limit_s) {
  if (model.objectives.size() < 2)
    throw InputError("payoff table needs at least two objectives");
  const VariableSpace& vs = model.vars;
  Bounds bounds;
  bounds.per_objective.resize(model.objectives.size());
  for (std::size_t k = 0; k < model.objectives.size(); ++k)
    bounds.per_objective[k].name = model.objectives[k].name;

  int i_f1 = model.objective_index("f1");
  int i_f2 = model.objective_index("f2");
  int i_f3 = model.objective_index("f3");
  if (i_f1 < 0 || i_f2 < 0)
    throw InputError("payoff table expects objectives f1 and f2");

  double f1_best = run_solve(model, model.objectives[i_f1], backend,
                             time_limit_s, {}, "min f1");
  double f2_best = run_solve(model, model.objectives[i_f2], backend,
                             time_limit_s, {}, "min f2");

  // Opening every temporary slot disturbs neither allocations nor coverage,
  // so the lexicographic worst case for f2 is always the full bill.
  double f2_worst =
      model.structure
          ? model.structure->temp_center_cost * vs.J * vs.T
          : f2_best;
  if (!model.structure) {
    Objective neg = negated(model.objectives[i_f2]);
    f2_worst = -run_solve(model, neg, backend, time_limit_s,
                          {{i_f1, f1_best}}, "max f2 | f1 optimal");
  }

  // No plan can cost more than sending every available dose to the dearest
  // coefficient, so a budget-stranded anchor falls back to that supply cap.
  auto f1_cap = [&]() {
    double max_w = 0.0;
    for (double c : model.objectives[i_f1].coeffs)
      max_w = std::max(max_w, std::abs(c));
    double doses = 0.0;
    if (model.structure)
      for (double a : model.structure->supply) doses += a;
    return model.structure ? max_w * doses : std::max(1.0, 10.0 * f1_best);
  };
  Objective neg_f1 = negated(model.objectives[i_f1]);
  double f1_worst;
  try {
    f1_worst = -run_solve(model, neg_f1, backend, time_limit_s,
                          {{i_f2, f2_best}}, "max f1 | f2 optimal");
  } catch (const BudgetError&) {
    f1_worst = f1_cap();
  }

  bounds.per_objective[i_f1] = {"f1", f1_best, f1_worst};
  bounds.per_objective[i_f2] = {"f2", f2_best, f2_worst};

  if (i_f3 >= 0) {
    double f3_best = -run_solve(model, negated(model.objectives[i_f3]),
                                backend, time_limit_s, {}, "max f3");
    double f1_at_f3;
    try {
      f1_at_f3 = -run_solve(model, neg_f1, backend, time_limit_s,
                            {{i_f3, f3_best}}, "max f1 | f3 optimal");
    } catch (const BudgetError&) {
      f1_at_f3 = f1_cap();
    }
    f1_worst = std::max(f1_worst, f1_at_f3);
    bounds.per_objective[i_f1].worst = f1_worst;
    // Gamma = 0 stays feasible and optimal-neutral for f1 and f2, so the
    // coverage objective bottoms out at zero across the payoff table.
    bounds.per_objective[i_f3] = {"f3", f3_best, 0.0};
  }
  return bounds;
}

Objective blend(const LinearModel& model, const Bounds& bounds, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw InputError("alpha must lie in [0, 1]");
  if (bounds.per_objective.size() != model.objectives.size())
    throw InputError("bounds do not match the model objectives");
  if (model.objectives.size() < 2)
    throw InputError("scalarization needs at least two objectives");

  int i_f1 = model.objective_index("f1");
  int i_f2 = model.objective_index("f2");
  int i_f3 = model.objective_index("f3");
  if (i_f1 < 0 || i_f2 < 0)
    throw InputError("scalarization expects objectives f1 and f2");

  Objective out;
  out.name = "blend";
  out.sense = ObjSense::Min;
  out.coeffs.assign(model.num_vars(), 0.0);
  out.offset = 0.0;

  auto add_min_term = [&](int idx, double weight) {
    const ObjectiveBounds& b = bounds.per_objective[idx];
    double span = b.worst - b.best;
    if (weight == 0.0 || span <= span_floor(b.best, b.worst)) return;
    const Objective& obj = model.objectives[idx];
    double scale = weight / span;
    for (int v = 0; v < model.num_vars(); ++v)
      out.coeffs[v] += scale * obj.coeffs[v];
    out.offset += scale * (obj.offset - b.best);
  };

  if (i_f3 < 0) {
    add_min_term(i_f1, alpha);
    add_min_term(i_f2, 1.0 - alpha);
  } else {
    add_min_term(i_f1, (1.0 - alpha) / 2.0);
    add_min_term(i_f2, (1.0 - alpha) / 2.0);
    const ObjectiveBounds& b = bounds.per_objective[i_f3];
    double span = b.best - b.worst;  // maximized objective
    if (alpha != 0.0 && span > span_floor(b.best, b.worst)) {
      const Objective& obj = model.objectives[i_f3];
      double scale = alpha / span;
      for (int v = 0; v < model.num_vars(); ++v)
        out.coeffs[v] -= scale * obj.coeffs[v];
      out.offset -= scale * (obj.offset - b.worst);
    }
  }
  return out;
}

SweepResult sweep(const LinearModel& model, const std::vector<double>& alphas,
                  const std::string& backend, double time_limit_s,
                  double gap_target, std::int64_t node_limit) {
  SweepResult result;
  result.bounds = compute_bounds(model, backend, time_limit_s);
  for (double alpha : alphas) {
    SweepPoint point;
    point.alpha = alpha;
    SolveRequest req;
    req.model = &model;
    req.blended = blend(model, result.bounds, alpha);
    req.time_limit_s = time_limit_s;
    req.gap_target = gap_target;
    req.node_limit = node_limit;
    point.solution = solve(req, backend);
    if (point.solution.status == SolveStatus::Optimal ||
        point.solution.status == SolveStatus::Feasible) {
      for (std::size_t k = 0; k < model.objectives.size(); ++k) {
        double raw = evaluate_objective(model, static_cast<int>(k),
                                        point.solution.x);
        point.raw.push_back(raw);
        const ObjectiveBounds& b = result.bounds.per_objective[k];
        bool maximized = model.objectives[k].sense == ObjSense::Max;
        double span = maximized ? b.best - b.worst : b.worst - b.best;
        double anchor = maximized ? b.worst : b.best;
        point.normalized.push_back(
            span > span_floor(b.best, b.worst) ? (raw - anchor) / span : 0.0);
      }
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

PlanSolution oracle_solve(const Instance& inst, double alpha,
                          const Bounds& bounds, double time_limit_s) {
  LinearModel model = build_baseline(inst);
  SolveRequest req;
  req.model = &model;
  req.blended = blend(model, bounds, alpha);
  req.time_limit_s = time_limit_s;
  return solve(req, "oracle");
}

}  // namespace mmv
