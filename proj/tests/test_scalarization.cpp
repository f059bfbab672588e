// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "mmv/model.hpp"
#include "mmv/scalarization.hpp"
#include "mmv/solve.hpp"
#include "support.hpp"

using namespace mmv;

namespace {

LinearModel feasible_model(std::uint64_t seed) {
  return build_baseline(mmvtest::tiny_instance(seed, true));
}

}  // namespace

TEST_CASE("default grid walks alpha from cost to priority") {
  std::vector<double> grid = default_alpha_grid();
  REQUIRE(grid.size() >= 5);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 1.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("payoff bounds bracket each objective") {
  LinearModel model = feasible_model(21);
  Bounds bounds = compute_bounds(model, "bnb");
  REQUIRE(bounds.per_objective.size() == 2);
  CHECK(bounds.per_objective[0].name == "f1");
  CHECK(bounds.per_objective[1].name == "f2");
  for (const ObjectiveBounds& b : bounds.per_objective)
    CHECK(b.best <= b.worst + 1e-9);
  const CampaignStructure& st = *model.structure;
  double full_bill = st.temp_center_cost * model.vars.J * model.vars.T;
  CHECK(bounds.per_objective[1].worst == doctest::Approx(full_bill));
  CHECK(bounds.per_objective[1].best >= 0.0);
}

TEST_CASE("bounds agree across backends on oracle-sized campaigns") {
  LinearModel model = feasible_model(6);
  if (!oracle_supports(model)) return;
  Bounds a = compute_bounds(model, "bnb");
  Bounds b = compute_bounds(model, "oracle");
  for (std::size_t i = 0; i < a.per_objective.size(); ++i) {
    CHECK(a.per_objective[i].best ==
          doctest::Approx(b.per_objective[i].best).epsilon(1e-9));
    CHECK(a.per_objective[i].worst ==
          doctest::Approx(b.per_objective[i].worst).epsilon(1e-9));
  }
}

TEST_CASE("blend rejects weights outside the unit interval") {
  LinearModel model = feasible_model(21);
  Bounds bounds = compute_bounds(model, "bnb");
  CHECK_THROWS_AS(blend(model, bounds, -0.1), InputError);
  CHECK_THROWS_AS(blend(model, bounds, 1.1), InputError);
}

TEST_CASE("blended value is the weighted normalized sum") {
  LinearModel model = feasible_model(34);
  Bounds bounds = compute_bounds(model, "bnb");
  double alpha = 0.6;
  Objective blended = blend(model, bounds, alpha);
  SolveRequest req;
  req.model = &model;
  req.blended = blended;
  req.time_limit_s = 60.0;
  PlanSolution sol = solve(req, "bnb");
  REQUIRE(sol.status == SolveStatus::Optimal);
  double expect = 0.0;
  for (int o = 0; o < 2; ++o) {
    const ObjectiveBounds& b = bounds.per_objective[o];
    double span = b.worst - b.best;
    if (span <= 0.0) continue;
    double raw = evaluate_objective(model, o, sol.x);
    expect += (o == 0 ? alpha : 1.0 - alpha) * (raw - b.best) / span;
  }
  CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("degenerate spans drop out of the blend") {
  Instance inst = mmvtest::tiny_instance(21, true);
  inst.temporary.clear();  // f2 is identically zero
  LinearModel model = build_baseline(inst);
  Bounds bounds = compute_bounds(model, "bnb");
  CHECK(bounds.per_objective[1].best == bounds.per_objective[1].worst);
  Objective blended = blend(model, bounds, 0.3);
  SolveRequest req;
  req.model = &model;
  req.blended = blended;
  req.time_limit_s = 60.0;
  PlanSolution sol = solve(req, "bnb");
  REQUIRE(sol.status == SolveStatus::Optimal);
  const ObjectiveBounds& b1 = bounds.per_objective[0];
  double span = b1.worst - b1.best;
  double raw = evaluate_objective(model, 0, sol.x);
  double expect = span > 0.0 ? 0.3 * (raw - b1.best) / span : 0.0;
  CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("alpha extremes recover the pure objectives") {
  LinearModel model = feasible_model(44);
  Bounds bounds = compute_bounds(model, "bnb");
  SolveRequest req;
  req.model = &model;
  req.time_limit_s = 60.0;
  req.blended = blend(model, bounds, 1.0);
  PlanSolution pri = solve(req, "bnb");
  REQUIRE(pri.status == SolveStatus::Optimal);
  CHECK(evaluate_objective(model, 0, pri.x) ==
        doctest::Approx(bounds.per_objective[0].best).epsilon(1e-9));
  req.blended = blend(model, bounds, 0.0);
  PlanSolution cost = solve(req, "bnb");
  REQUIRE(cost.status == SolveStatus::Optimal);
  CHECK(evaluate_objective(model, 1, cost.x) ==
        doctest::Approx(bounds.per_objective[1].best).epsilon(1e-9));
}

TEST_CASE("sweep traces a monotone frontier at proven optima") {
  LinearModel model = feasible_model(27);
  SweepResult res = sweep(model, default_alpha_grid(), "bnb", 60.0);
  REQUIRE(res.points.size() == default_alpha_grid().size());
  double prev_f1 = 0.0, prev_f2 = 0.0;
  bool have_prev = false;
  for (const SweepPoint& pt : res.points) {
    REQUIRE(pt.solution.status == SolveStatus::Optimal);
    REQUIRE(pt.raw.size() == 2);
    REQUIRE(pt.normalized.size() == 2);
    for (double n : pt.normalized) {
      CHECK(n >= -1e-9);
      CHECK(n <= 1.0 + 1e-9);
    }
    if (have_prev) {
      CHECK(pt.raw[0] <= prev_f1 + 1e-9);
      CHECK(pt.raw[1] >= prev_f2 - 1e-9);
    }
    prev_f1 = pt.raw[0];
    prev_f2 = pt.raw[1];
    have_prev = true;
  }
}

TEST_CASE("oracle convenience wrapper matches the dispatch path") {
  Instance inst = mmvtest::tiny_instance(16, true);
  LinearModel model = build_baseline(inst);
  if (!oracle_supports(model)) return;
  Bounds bounds = compute_bounds(model, "oracle");
  PlanSolution direct = oracle_solve(inst, 0.7, bounds);
  SolveRequest req;
  req.model = &model;
  req.blended = blend(model, bounds, 0.7);
  req.time_limit_s = 60.0;
  PlanSolution via = solve(req, "oracle");
  REQUIRE(direct.status == SolveStatus::Optimal);
  CHECK(direct.objective == doctest::Approx(via.objective).epsilon(1e-12));
}

TEST_CASE("robust bounds cover the third objective") {
  RobustInstance rob;
  rob.base = mmvtest::tiny_instance(37, true);
  int L = rob.base.num_neighborhoods(), P = rob.base.num_groups();
  rob.slack.assign(L, std::vector<double>(P, 1.0));
  LinearModel model = build_robust(rob);
  Bounds bounds = compute_bounds(model, "bnb");
  REQUIRE(bounds.per_objective.size() == 3);
  CHECK(bounds.per_objective[2].name == "f3");
  // f3 is maximized: best is the high coverage value.
  CHECK(bounds.per_objective[2].best >= bounds.per_objective[2].worst - 1e-9);
  CHECK(bounds.per_objective[2].best <= L * P + 1e-9);
  CHECK(bounds.per_objective[2].worst >= -1e-9);

  // With enough supply and capacity a coverage-heavy blend saturates
  // every Gamma.
  for (double& a : rob.base.supply) a += 1000.0;
  for (Center& c : rob.base.permanent) c.capacity += 1000.0;
  LinearModel rich = build_robust(rob);
  Bounds rich_bounds = compute_bounds(rich, "bnb");
  Objective blended = blend(rich, rich_bounds, 1.0);
  SolveRequest req;
  req.model = &rich;
  req.blended = blended;
  req.time_limit_s = 60.0;
  PlanSolution sol = solve(req, "bnb");
  REQUIRE(sol.status == SolveStatus::Optimal);
  for (int l = 0; l < L; ++l)
    for (int p = 0; p < P; ++p)
      CHECK(sol.x[rich.vars.gamma_cap(l, p)] == doctest::Approx(1.0));
}
