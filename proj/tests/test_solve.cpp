// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mmv/model.hpp"
#include "mmv/scalarization.hpp"
#include "mmv/scenarios.hpp"
#include "mmv/solve.hpp"
#include "support.hpp"

using namespace mmv;

namespace {

PlanSolution run(const LinearModel& model, const Objective& blended,
                 const std::string& backend, std::int64_t node_limit = 0) {
  SolveRequest req;
  req.model = &model;
  req.blended = blended;
  req.time_limit_s = 60.0;
  req.node_limit = node_limit;
  return solve(req, backend);
}

}  // namespace

TEST_CASE("both backends agree across seeds and blend weights") {
  int cells = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    LinearModel model = build_baseline(mmvtest::tiny_instance(seed));
    if (!oracle_supports(model)) continue;
    Bounds bounds;
    try {
      bounds = compute_bounds(model, "oracle");
    } catch (const InfeasibleError&) {
      continue;
    }
    for (double alpha : {0.0, 0.3, 0.7, 1.0}) {
      Objective blended = blend(model, bounds, alpha);
      PlanSolution a = run(model, blended, "oracle");
      PlanSolution b = run(model, blended, "bnb");
      REQUIRE(a.status == SolveStatus::Optimal);
      REQUIRE(b.status == SolveStatus::Optimal);
      CHECK(std::abs(a.objective - b.objective) <=
            1e-6 * std::max(1.0, std::abs(a.objective)));
      ++cells;
    }
  }
  CHECK(cells >= 20);
}

TEST_CASE("solutions come back certificate-clean") {
  LinearModel model = build_baseline(mmvtest::tiny_instance(41, true));
  Bounds bounds = compute_bounds(model, "bnb");
  PlanSolution sol = run(model, blend(model, bounds, 0.5), "bnb");
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(verify_solution(model, sol.x).empty());
  CHECK(sol.gap == 0.0);
  CHECK(sol.best_bound == doctest::Approx(sol.objective));
  CHECK(sol.backend == "bnb");
  REQUIRE(sol.objective_values.size() == 2);
  CHECK(sol.objective_values[0].first == "f1");
  CHECK(sol.objective_values[0].second ==
        doctest::Approx(evaluate_objective(model, 0, sol.x)));
}

TEST_CASE("zero demand needs zero doses") {
  Instance inst = mmvtest::tiny_instance(9, true);
  for (auto& row : inst.demand)
    for (double& d : row) d = 0.0;
  LinearModel model = build_baseline(inst);
  for (const char* backend : {"bnb", "oracle"}) {
    if (backend == std::string("oracle") && !oracle_supports(model)) continue;
    PlanSolution sol = run(model, model.objectives[0], backend);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(0.0));
    for (double v : sol.x) CHECK(v == doctest::Approx(0.0));
  }
}

TEST_CASE("both backends flag an impossible campaign") {
  Instance inst = mmvtest::tiny_instance(14, true);
  inst.supply.assign(inst.supply.size(), 0.0);  // demand but no vaccine
  bool has_demand = inst.total_demand() > 0;
  REQUIRE(has_demand);
  LinearModel model = build_baseline(inst);
  for (const char* backend : {"bnb", "oracle"}) {
    if (backend == std::string("oracle") && !oracle_supports(model)) continue;
    PlanSolution sol = run(model, model.objectives[0], backend);
    CHECK(sol.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("repeated solves are bit-identical") {
  LinearModel model = build_baseline(mmvtest::tiny_instance(28, true));
  Bounds bounds = compute_bounds(model, "bnb");
  Objective blended = blend(model, bounds, 0.7);
  PlanSolution a = run(model, blended, "bnb");
  PlanSolution b = run(model, blended, "bnb");
  CHECK(a.objective == b.objective);
  CHECK(a.nodes == b.nodes);
  CHECK(a.x == b.x);
}

TEST_CASE("node limits cut the search deterministically") {
  LinearModel model = build_baseline(mmvtest::tiny_instance(33, true));
  Bounds bounds = compute_bounds(model, "bnb");
  Objective blended = blend(model, bounds, 0.5);
  PlanSolution full = run(model, blended, "bnb");
  PlanSolution a = run(model, blended, "bnb", 2);
  PlanSolution b = run(model, blended, "bnb", 2);
  CHECK(a.nodes == b.nodes);
  CHECK(a.objective == b.objective);
  CHECK(a.x == b.x);
  CHECK(a.nodes <= full.nodes);
  CHECK(a.objective >= full.objective - 1e-9);
  if (a.status == SolveStatus::Feasible) {
    CHECK(a.gap > 0.0);
    CHECK(a.best_bound <= a.objective + 1e-9);
  }
}

TEST_CASE("objective fixes pin the lexicographic payoff") {
  LinearModel model = build_baseline(mmvtest::tiny_instance(47, true));
  if (model.vars.J == 0) return;
  // First minimize cost alone, then ask for the best f1 at that cost.
  PlanSolution cost_only = run(model, model.objectives[1], "bnb");
  REQUIRE(cost_only.status == SolveStatus::Optimal);
  SolveRequest req;
  req.model = &model;
  req.blended = model.objectives[0];
  req.time_limit_s = 60.0;
  req.objective_fixes = {{1, cost_only.objective}};
  PlanSolution best_f1 = solve(req, "bnb");
  REQUIRE(best_f1.status == SolveStatus::Optimal);
  CHECK(evaluate_objective(model, 1, best_f1.x) ==
        doctest::Approx(cost_only.objective).epsilon(1e-9));
  CHECK(evaluate_objective(model, 0, best_f1.x) <=
        evaluate_objective(model, 0, cost_only.x) + 1e-6);
}

TEST_CASE("restricted groups avoid permanent centers") {
  Instance inst = mmvtest::tiny_instance(52, true);
  if (inst.num_temporary() == 0) inst.temporary.push_back({"T1", 50.0});
  LinearModel model = build_baseline(inst);
  add_group_restriction(&model, inst, {inst.groups[0].id});
  SolveRequest req;
  req.model = &model;
  req.blended = model.objectives[0];
  req.time_limit_s = 60.0;
  PlanSolution sol = solve(req, "bnb");
  if (sol.status != SolveStatus::Optimal &&
      sol.status != SolveStatus::Feasible)
    return;  // the random campaign may be impossible under the restriction
  const VariableSpace& vs = model.vars;
  for (int l = 0; l < vs.L; ++l)
    for (int t = 1; t <= vs.T; ++t)
      for (int i = 0; i < vs.I; ++i)
        CHECK(sol.x[vs.phi(l, 0, t, i)] == doctest::Approx(0.0));
}

TEST_CASE("unknown backend names are rejected") {
  LinearModel model = build_baseline(mmvtest::tiny_instance(1, true));
  SolveRequest req;
  req.model = &model;
  req.blended = model.objectives[0];
  CHECK_THROWS_AS(solve(req, "simplex9000"), InputError);
  auto names = backend_names();
  CHECK(std::find(names.begin(), names.end(), "bnb") != names.end());
  CHECK(std::find(names.begin(), names.end(), "oracle") != names.end());
}

TEST_CASE("oracle refuses oversized campaigns") {
  ScenarioConfig config;
  config.scenario = "illustrative";
  config.supply = {500.0};
  LinearModel model = build_baseline(gen_illustrative(config));
  CHECK_FALSE(oracle_supports(model));
  SolveRequest req;
  req.model = &model;
  req.blended = model.objectives[0];
  CHECK_THROWS_AS(solve(req, "oracle"), ModelError);
}

TEST_CASE("robust model with zero slack matches the baseline optimum") {
  Instance base = mmvtest::tiny_instance(18, true);
  RobustInstance rob;
  rob.base = base;
  rob.slack.assign(base.num_neighborhoods(),
                   std::vector<double>(base.num_groups(), 0.0));
  LinearModel plain = build_baseline(base);
  LinearModel robust = build_robust(rob);
  PlanSolution a = run(plain, plain.objectives[0], "bnb");
  PlanSolution b = run(robust, robust.objectives[0], "bnb");
  REQUIRE(a.status == SolveStatus::Optimal);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}
