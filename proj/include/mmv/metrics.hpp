// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include "mmv/scalarization.hpp"

namespace mmv {

// A day counts as active for a group once at least half a dose lands on it;
// continuous allocations otherwise smear hairline flows across the horizon.
constexpr double kActiveDoseThreshold = 0.5;

struct SolutionMetrics {
  double total_doses = 0.0;
  double temp_doses = 0.0;
  double temp_share_pct = 0.0;        // P
  int duration_days = 0;              // D
  std::vector<int> duration_by_group; // D_p
  std::vector<double> doses_by_group;
  std::vector<double> temp_doses_by_group;
  // T_p: group share of all temporary-center doses. Meaningless without any
  // temporary activity; temp_share_defined flags that.
  std::vector<double> temp_group_share_pct;
  bool temp_share_defined = false;
  // G_p: share of the group's demand served at temporary centers.
  std::vector<double> temp_demand_pct;
  int open_center_days = 0;
  double coverage_q_pct = 0.0;        // Q, robust models only
};

SolutionMetrics compute_metrics(const LinearModel& model,
                                const std::vector<double>& x);

// One center's activity: per active day, the installation neighborhood (for
// temporary centers), doses per group, and doses per served neighborhood.
struct ScheduleCell {
  int neighborhood = 0;
  int group = 0;
  double doses = 0.0;
};

struct ScheduleRow {
  int day = 0;
  int installed = -1;  // neighborhood index, -1 for permanent centers
  std::vector<ScheduleCell> cells;  // positive entries only
  double total = 0.0;
};

struct ScheduleTable {
  std::string center_id;
  bool temporary = false;
  std::vector<ScheduleRow> rows;  // active days only, ascending
};

ScheduleTable schedule_table(const LinearModel& model,
                             const std::vector<double>& x,
                             const Instance& inst, const std::string& center_id,
                             int day_lo, int day_hi);

void write_center_schedule_csv(const ScheduleTable& table, const Instance& inst,
                               std::ostream& out);

// Day-by-day administration table: per group doses split by center kind,
// cumulative totals, and the number of open temporary centers.
void write_schedule_csv(const LinearModel& model, const std::vector<double>& x,
                        std::ostream& out);

// Cumulative doses and demand share per group per day.
void write_cumulative_csv(const LinearModel& model, const std::vector<double>& x,
                          std::ostream& out);

void write_sweep_csv(const LinearModel& model, const SweepResult& sweep,
                     std::ostream& out);

}  // namespace mmv
