// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "doctest.h"
#include "mmv/metrics.hpp"
#include "mmv/model.hpp"
#include "mmv/scalarization.hpp"
#include "support.hpp"

using namespace mmv;

namespace {

// Two neighborhoods, two groups, one permanent and one temporary center,
// three days. Small enough to place every dose by hand.
Instance fixture() {
  Instance inst;
  inst.name = "fixture";
  inst.horizon = 3;
  inst.macrozones = {"Z1"};
  inst.zone_members = {{0, 1}};
  inst.neighborhoods = {"N1", "N2"};
  inst.groups = {{"GA", 0.5, 0.0, false}, {"GB", 0.2, 0.0, false}};
  inst.permanent = {{"P1", 10.0}};
  inst.temporary = {{"T1", 8.0}};
  inst.coverage = {{0, 1}, {1}};
  inst.supply = {10.0, 10.0, 10.0};
  inst.demand = {{4.0, 0.0}, {3.0, 5.0}};
  inst.temp_center_cost = 350.0;
  return inst;
}

// Day 1: the permanent center serves GA at N1, a temporary at N1 reaches
// GA at N2. Day 2: the permanent center serves GB at N2.
std::vector<double> hand_plan(const LinearModel& model) {
  const VariableSpace& vs = model.vars;
  std::vector<double> x(model.num_vars(), 0.0);
  x[vs.phi(0, 0, 1, 0)] = 4.0;
  x[vs.y(0, 1, 0)] = 1.0;
  x[vs.v(0, 0, 1, 1)] = 1.0;
  x[vs.gamma(1, 0, 1, 0)] = 3.0;
  x[vs.phi(1, 1, 2, 0)] = 5.0;
  return x;
}

}  // namespace

TEST_CASE("metrics add up on a hand-built plan") {
  LinearModel model = build_baseline(fixture());
  std::vector<double> x = hand_plan(model);
  REQUIRE(verify_solution(model, x).empty());
  SolutionMetrics m = compute_metrics(model, x);
  CHECK(m.total_doses == doctest::Approx(12.0));
  CHECK(m.temp_doses == doctest::Approx(3.0));
  CHECK(m.temp_share_pct == doctest::Approx(25.0));
  CHECK(m.duration_days == 2);
  REQUIRE(m.duration_by_group.size() == 2);
  CHECK(m.duration_by_group[0] == 1);
  CHECK(m.duration_by_group[1] == 2);
  CHECK(m.doses_by_group[0] == doctest::Approx(7.0));
  CHECK(m.doses_by_group[1] == doctest::Approx(5.0));
  CHECK(m.temp_doses_by_group[0] == doctest::Approx(3.0));
  CHECK(m.temp_doses_by_group[1] == doctest::Approx(0.0));
  CHECK(m.temp_share_defined);
  CHECK(m.temp_group_share_pct[0] == doctest::Approx(100.0));
  CHECK(m.temp_group_share_pct[1] == doctest::Approx(0.0));
  CHECK(m.temp_demand_pct[0] == doctest::Approx(100.0 * 3.0 / 7.0));
  CHECK(m.temp_demand_pct[1] == doctest::Approx(0.0));
  CHECK(m.open_center_days == 1);
  CHECK(m.coverage_q_pct == 0.0);
}

TEST_CASE("hairline doses do not extend the duration") {
  LinearModel model = build_baseline(fixture());
  std::vector<double> x = hand_plan(model);
  x[model.vars.phi(0, 0, 3, 0)] = 0.4;  // below the active threshold
  SolutionMetrics m = compute_metrics(model, x);
  CHECK(m.duration_days == 2);
  CHECK(m.duration_by_group[0] == 1);
  CHECK(m.total_doses == doctest::Approx(12.4));
}

TEST_CASE("a plan with no temporary doses leaves shares undefined") {
  Instance inst = fixture();
  inst.demand = {{4.0, 0.0}, {0.0, 5.0}};
  LinearModel model = build_baseline(inst);
  const VariableSpace& vs = model.vars;
  std::vector<double> x(model.num_vars(), 0.0);
  x[vs.phi(0, 0, 1, 0)] = 4.0;
  x[vs.phi(1, 1, 1, 0)] = 5.0;
  REQUIRE(verify_solution(model, x).empty());
  SolutionMetrics m = compute_metrics(model, x);
  CHECK_FALSE(m.temp_share_defined);
  CHECK(m.temp_share_pct == 0.0);
  CHECK(m.duration_days == 1);
  CHECK(m.open_center_days == 0);
}

TEST_CASE("metrics demand a matching solution vector") {
  LinearModel model = build_baseline(fixture());
  std::vector<double> x(model.num_vars() - 1, 0.0);
  CHECK_THROWS_AS(compute_metrics(model, x), InputError);
}

TEST_CASE("coverage percentage reads the robust Gamma block") {
  RobustInstance rob;
  rob.base = fixture();
  rob.slack.assign(2, std::vector<double>(2, 0.0));
  LinearModel model = build_robust(rob);
  std::vector<double> x = hand_plan(model);
  x.resize(model.num_vars(), 0.0);
  x[model.vars.gamma_cap(0, 0)] = 1.0;
  x[model.vars.gamma_cap(1, 1)] = 0.5;
  SolutionMetrics m = compute_metrics(model, x);
  CHECK(m.coverage_q_pct == doctest::Approx(100.0 * 1.5 / 4.0));
}

TEST_CASE("schedule table reports the temporary center's day") {
  Instance inst = fixture();
  LinearModel model = build_baseline(inst);
  std::vector<double> x = hand_plan(model);
  ScheduleTable table = schedule_table(model, x, inst, "T1", 1, 3);
  CHECK(table.center_id == "T1");
  CHECK(table.temporary);
  REQUIRE(table.rows.size() == 1);
  const ScheduleRow& row = table.rows[0];
  CHECK(row.day == 1);
  CHECK(row.installed == 0);
  CHECK(row.total == doctest::Approx(3.0));
  REQUIRE(row.cells.size() == 1);
  CHECK(row.cells[0].neighborhood == 1);
  CHECK(row.cells[0].group == 0);
  CHECK(row.cells[0].doses == doctest::Approx(3.0));
}

TEST_CASE("schedule table covers permanent centers and day windows") {
  Instance inst = fixture();
  LinearModel model = build_baseline(inst);
  std::vector<double> x = hand_plan(model);
  ScheduleTable table = schedule_table(model, x, inst, "P1", 1, 3);
  CHECK_FALSE(table.temporary);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].day == 1);
  CHECK(table.rows[0].installed == -1);
  CHECK(table.rows[0].total == doctest::Approx(4.0));
  CHECK(table.rows[1].day == 2);
  CHECK(table.rows[1].total == doctest::Approx(5.0));

  ScheduleTable late = schedule_table(model, x, inst, "P1", 2, 3);
  REQUIRE(late.rows.size() == 1);
  CHECK(late.rows[0].day == 2);

  CHECK_THROWS_AS(schedule_table(model, x, inst, "P9", 1, 3), InputError);
  CHECK_THROWS_AS(schedule_table(model, x, inst, "P1", 0, 3), InputError);
  CHECK_THROWS_AS(schedule_table(model, x, inst, "P1", 1, 4), InputError);
  CHECK_THROWS_AS(schedule_table(model, x, inst, "P1", 3, 1), InputError);
}

TEST_CASE("csv writers emit their headers and rows") {
  Instance inst = fixture();
  LinearModel model = build_baseline(inst);
  std::vector<double> x = hand_plan(model);

  std::ostringstream sched;
  write_schedule_csv(model, x, sched);
  CHECK(sched.str().find("day") == 0);
  CHECK(sched.str().find('\n') != std::string::npos);

  std::ostringstream cum;
  write_cumulative_csv(model, x, cum);
  CHECK(cum.str().find("day") == 0);

  std::ostringstream center;
  write_center_schedule_csv(schedule_table(model, x, inst, "T1", 1, 3), inst,
                            center);
  CHECK(center.str().find("day") == 0);
  CHECK(center.str().find("N2") != std::string::npos);
}

TEST_CASE("sweep csv carries one row per alpha") {
  LinearModel model = build_baseline(mmvtest::tiny_instance(25, true));
  SweepResult res = sweep(model, {0.0, 0.5, 1.0}, "bnb", 60.0);
  std::ostringstream out;
  write_sweep_csv(model, res, out);
  std::string text = out.str();
  CHECK(text.rfind("alpha,f1_raw,f2_raw,f1_norm,f2_norm,Z,gap,runtime_s,"
                   "status,P_pct,D_days",
                   0) == 0);
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 4);
}
