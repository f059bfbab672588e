// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "mmv/metrics.hpp"

namespace mmv {
namespace {

struct DoseGrid {
  // [p][t-1] doses by group and day, split by center kind
  std::vector<std::vector<double>> perm, temp;
};

DoseGrid collect(const LinearModel& model, const std::vector<double>& x) {
  const VariableSpace& vs = model.vars;
  if (static_cast<int>(x.size()) != model.num_vars())
    throw InputError("solution vector does not match the model");
  DoseGrid grid;
  grid.perm.assign(vs.P, std::vector<double>(vs.T, 0.0));
  grid.temp.assign(vs.P, std::vector<double>(vs.T, 0.0));
  for (int l = 0; l < vs.L; ++l) {
    for (int p = 0; p < vs.P; ++p) {
      for (int t = 1; t <= vs.T; ++t) {
        for (int i = 0; i < vs.I; ++i)
          grid.perm[p][t - 1] += x[vs.phi(l, p, t, i)];
        for (int j = 0; j < vs.J; ++j)
          grid.temp[p][t - 1] += x[vs.gamma(l, p, t, j)];
      }
    }
  }
  return grid;
}

int open_days(const LinearModel& model, const std::vector<double>& x) {
  const VariableSpace& vs = model.vars;
  int count = 0;
  for (int j = 0; j < vs.J; ++j)
    for (int t = 1; t <= vs.T; ++t)
      for (int l = 0; l < vs.L; ++l)
        if (x[vs.y(j, t, l)] > 0.5) ++count;
  return count;
}

}  // namespace

SolutionMetrics compute_metrics(const LinearModel& model,
                                const std::vector<double>& x) {
  const VariableSpace& vs = model.vars;
  DoseGrid grid = collect(model, x);
  SolutionMetrics m;
  m.duration_by_group.assign(vs.P, 0);
  m.doses_by_group.assign(vs.P, 0.0);
  m.temp_doses_by_group.assign(vs.P, 0.0);
  m.temp_group_share_pct.assign(vs.P, 0.0);
  m.temp_demand_pct.assign(vs.P, 0.0);
  for (int p = 0; p < vs.P; ++p) {
    for (int t = 1; t <= vs.T; ++t) {
      double doses = grid.perm[p][t - 1] + grid.temp[p][t - 1];
      m.doses_by_group[p] += doses;
      m.temp_doses_by_group[p] += grid.temp[p][t - 1];
      if (doses >= kActiveDoseThreshold) {
        m.duration_by_group[p] = t;
        m.duration_days = std::max(m.duration_days, t);
      }
    }
    m.total_doses += m.doses_by_group[p];
    m.temp_doses += m.temp_doses_by_group[p];
  }
  m.temp_share_pct =
      m.total_doses > 0.0 ? 100.0 * m.temp_doses / m.total_doses : 0.0;
  m.temp_share_defined = m.temp_doses > 0.0;
  if (m.temp_share_defined)
    for (int p = 0; p < vs.P; ++p)
      m.temp_group_share_pct[p] = 100.0 * m.temp_doses_by_group[p] / m.temp_doses;
  if (model.structure) {
    const CampaignStructure& st = *model.structure;
    for (int p = 0; p < vs.P; ++p) {
      double pop = 0.0;
      for (int l = 0; l < vs.L; ++l) pop += st.demand[l][p];
      m.temp_demand_pct[p] =
          pop > 0.0 ? 100.0 * m.temp_doses_by_group[p] / pop : 0.0;
    }
  }
  m.open_center_days = open_days(model, x);
  if (vs.robust) {
    double total = 0.0;
    for (int l = 0; l < vs.L; ++l)
      for (int p = 0; p < vs.P; ++p) total += x[vs.gamma_cap(l, p)];
    int pairs = vs.L * vs.P;
    m.coverage_q_pct = pairs > 0 ? 100.0 * total / pairs : 0.0;
  }
  return m;
}

ScheduleTable schedule_table(const LinearModel& model,
                             const std::vector<double>& x,
                             const Instance& inst, const std::string& center_id,
                             int day_lo, int day_hi) {
  const VariableSpace& vs = model.vars;
  if (static_cast<int>(x.size()) != model.num_vars())
    throw InputError("solution vector does not match the model");
  if (day_lo < 1 || day_hi > vs.T || day_lo > day_hi)
    throw InputError("day range outside the horizon");
  int perm_idx = -1, temp_idx = -1;
  for (int i = 0; i < inst.num_permanent(); ++i)
    if (inst.permanent[i].id == center_id) perm_idx = i;
  for (int j = 0; j < inst.num_temporary(); ++j)
    if (inst.temporary[j].id == center_id) temp_idx = j;
  if (perm_idx < 0 && temp_idx < 0)
    throw InputError("unknown center id: " + center_id);

  ScheduleTable table;
  table.center_id = center_id;
  table.temporary = temp_idx >= 0;
  for (int t = day_lo; t <= day_hi; ++t) {
    ScheduleRow row;
    row.day = t;
    if (temp_idx >= 0)
      for (int l = 0; l < vs.L; ++l)
        if (x[vs.y(temp_idx, t, l)] > 0.5) row.installed = l;
    for (int l = 0; l < vs.L; ++l)
      for (int p = 0; p < vs.P; ++p) {
        double d = temp_idx >= 0 ? x[vs.gamma(l, p, t, temp_idx)]
                                 : x[vs.phi(l, p, t, perm_idx)];
        if (d > 0.0) row.cells.push_back({l, p, d});
        row.total += d;
      }
    if (row.total >= kActiveDoseThreshold) table.rows.push_back(row);
  }
  return table;
}

void write_center_schedule_csv(const ScheduleTable& table, const Instance& inst,
                               std::ostream& out) {
  out << "day,installed,neighborhood,group,doses\n";
  for (const ScheduleRow& row : table.rows) {
    std::string installed =
        row.installed >= 0 ? inst.neighborhoods[row.installed] : "";
    for (const ScheduleCell& cell : row.cells)
      out << row.day << "," << installed << ","
          << inst.neighborhoods[cell.neighborhood] << ","
          << inst.groups[cell.group].id << "," << cell.doses << "\n";
  }
}

void write_schedule_csv(const LinearModel& model, const std::vector<double>& x,
                        std::ostream& out) {
  const VariableSpace& vs = model.vars;
  DoseGrid grid = collect(model, x);
  out << "day,group,doses_permanent,doses_temporary,doses_total,"
         "cumulative_group,open_temporary_centers\n";
  std::vector<double> cumulative(vs.P, 0.0);
  for (int t = 1; t <= vs.T; ++t) {
    int opens = 0;
    for (int j = 0; j < vs.J; ++j)
      for (int l = 0; l < vs.L; ++l)
        if (x[vs.y(j, t, l)] > 0.5) ++opens;
    for (int p = 0; p < vs.P; ++p) {
      double dp = grid.perm[p][t - 1], dt = grid.temp[p][t - 1];
      cumulative[p] += dp + dt;
      out << t << "," << p << "," << dp << "," << dt << "," << dp + dt << ","
          << cumulative[p] << "," << opens << "\n";
    }
  }
}

void write_cumulative_csv(const LinearModel& model, const std::vector<double>& x,
                          std::ostream& out) {
  const VariableSpace& vs = model.vars;
  DoseGrid grid = collect(model, x);
  std::vector<double> pop(vs.P, 0.0);
  if (model.structure)
    for (int p = 0; p < vs.P; ++p)
      for (int l = 0; l < vs.L; ++l) pop[p] += model.structure->demand[l][p];
  out << "day,group,cumulative_doses,cumulative_pct\n";
  std::vector<double> cumulative(vs.P, 0.0);
  for (int t = 1; t <= vs.T; ++t) {
    for (int p = 0; p < vs.P; ++p) {
      cumulative[p] += grid.perm[p][t - 1] + grid.temp[p][t - 1];
      out << t << "," << p << "," << cumulative[p] << ",";
      if (pop[p] > 0.0) out << 100.0 * cumulative[p] / pop[p];
      out << "\n";
    }
  }
}

void write_sweep_csv(const LinearModel& model, const SweepResult& sweep,
                     std::ostream& out) {
  bool robust = model.vars.robust;
  out << "alpha,f1_raw,f2_raw";
  if (robust) out << ",f3_raw";
  out << ",f1_norm,f2_norm";
  if (robust) out << ",f3_norm";
  out << ",Z,gap,runtime_s,status,P_pct,D_days\n";
  for (const SweepPoint& point : sweep.points) {
    out << point.alpha;
    bool solved = !point.raw.empty();
    int nobj = static_cast<int>(model.objectives.size());
    for (int k = 0; k < nobj; ++k) {
      out << ",";
      if (solved) out << point.raw[k];
    }
    for (int k = 0; k < nobj; ++k) {
      out << ",";
      if (solved) out << point.normalized[k];
    }
    out << ",";
    if (solved) out << point.solution.objective;
    out << "," << point.solution.gap << "," << point.solution.runtime_s << ","
        << to_string(point.solution.status);
    if (solved) {
      SolutionMetrics m = compute_metrics(model, point.solution.x);
      out << "," << m.temp_share_pct << "," << m.duration_days;
    } else {
      out << ",,";
    }
    out << "\n";
  }
}

}  // namespace mmv
