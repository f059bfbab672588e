// SPDX-License-Identifier: Apache-2.0

#include "mmv/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int VariableSpace::num_vars() const {
  int n = L * P * T * I + L * P * T * J + J * T * L + J * P * T * L;
  if (robust) n += L * P;
  return n;
}

int VariableSpace::phi(int l, int p, int t, int i) const {
  return ((l * P + p) * T + (t - 1)) * I + i;
}

int VariableSpace::gamma(int l, int p, int t, int j) const {
  return L * P * T * I + ((l * P + p) * T + (t - 1)) * J + j;
}

int VariableSpace::y(int j, int t, int l) const {
  return L * P * T * (I + J) + (j * T + (t - 1)) * L + l;
}

int VariableSpace::v(int j, int p, int t, int l) const {
  return L * P * T * (I + J) + J * T * L + ((j * P + p) * T + (t - 1)) * L + l;
}

int VariableSpace::gamma_cap(int l, int p) const {
  return L * P * T * (I + J) + J * T * L + J * P * T * L + l * P + p;
}

VariableSpace::Decoded VariableSpace::decode(int var) const {
  Decoded d;
  int n_phi = L * P * T * I;
  int n_gamma = L * P * T * J;
  int n_y = J * T * L;
  int n_v = J * P * T * L;
  if (var < n_phi) {
    d.kind = VarKind::Phi;
    d.i = var % I; var /= I;
    d.t = var % T + 1; var /= T;
    d.p = var % P; d.l = var / P;
    return d;
  }
  var -= n_phi;
  if (var < n_gamma) {
    d.kind = VarKind::Gamma;
    d.j = var % J; var /= J;
    d.t = var % T + 1; var /= T;
    d.p = var % P; d.l = var / P;
    return d;
  }
  var -= n_gamma;
  if (var < n_y) {
    d.kind = VarKind::Y;
    d.l = var % L; var /= L;
    d.t = var % T + 1; d.j = var / T;
    return d;
  }
  var -= n_y;
  if (var < n_v) {
    d.kind = VarKind::V;
    d.l = var % L; var /= L;
    d.t = var % T + 1; var /= T;
    d.p = var % P; d.j = var / P;
    return d;
  }
  var -= n_v;
  d.kind = VarKind::GammaCap;
  d.p = var % P; d.l = var / P;
  return d;
}

int LinearModel::objective_index(const std::string& name) const {
  for (int k = 0; k < static_cast<int>(objectives.size()); ++k)
    if (objectives[k].name == name) return k;
  return -1;
}

namespace {

void push(Row* row, int var, double coef) {
  if (coef != 0.0) row->coeffs.emplace_back(var, coef);
}

// Families shared by the baseline and robust builders. When eta is null the
// demand rows are family (5) and linking uses pop as big-M; otherwise the
// demand rows take family (15) shape and linking big-M is pop + eta.
LinearModel build_common(const Instance& inst,
                         const std::vector<std::vector<double>>* eta) {
  LinearModel m;
  VariableSpace& s = m.vars;
  s.L = inst.num_neighborhoods();
  s.P = inst.num_groups();
  s.T = inst.horizon;
  s.I = inst.num_permanent();
  s.J = inst.num_temporary();
  s.robust = eta != nullptr;

  const int n = s.num_vars();
  m.lower.assign(n, 0.0);
  m.upper.assign(n, kInf);
  m.integer.assign(n, 0);
  for (int j = 0; j < s.J; ++j)
    for (int t = 1; t <= s.T; ++t)
      for (int l = 0; l < s.L; ++l) {
        int id = s.y(j, t, l);
        m.upper[id] = 1.0;
        m.integer[id] = 1;
      }
  for (int j = 0; j < s.J; ++j)
    for (int p = 0; p < s.P; ++p)
      for (int t = 1; t <= s.T; ++t)
        for (int l = 0; l < s.L; ++l) {
          int id = s.v(j, p, t, l);
          m.upper[id] = 1.0;
          m.integer[id] = 1;
        }
  if (s.robust)
    for (int l = 0; l < s.L; ++l)
      for (int p = 0; p < s.P; ++p)
        m.upper[s.gamma_cap(l, p)] = 1.0;

  // (4) daily supply
  for (int t = 1; t <= s.T; ++t) {
    Row row;
    row.sense = RowSense::LE;
    row.rhs = inst.supply[t - 1];
    row.tag = {RowFamily::Supply, t};
    for (int l = 0; l < s.L; ++l)
      for (int p = 0; p < s.P; ++p)
        for (int i = 0; i < s.I; ++i) push(&row, s.phi(l, p, t, i), 1.0);
    for (int l = 0; l < s.L; ++l)
      for (int p = 0; p < s.P; ++p)
        for (int j = 0; j < s.J; ++j) push(&row, s.gamma(l, p, t, j), 1.0);
    std::sort(row.coeffs.begin(), row.coeffs.end());
    m.rows.push_back(std::move(row));
  }

  // (5) demand, or (15) with the Gamma relief term
  for (int l = 0; l < s.L; ++l)
    for (int p = 0; p < s.P; ++p) {
      Row row;
      row.sense = RowSense::GE;
      row.rhs = inst.demand[l][p];
      row.tag = {RowFamily::Demand, l, p};
      for (int t = 1; t <= s.T; ++t)
        for (int i = 0; i < s.I; ++i) push(&row, s.phi(l, p, t, i), 1.0);
      for (int t = 1; t <= s.T; ++t)
        for (int j = 0; j < s.J; ++j) push(&row, s.gamma(l, p, t, j), 1.0);
      if (eta) push(&row, s.gamma_cap(l, p), -(*eta)[l][p]);
      std::sort(row.coeffs.begin(), row.coeffs.end());
      m.rows.push_back(std::move(row));
    }

  // (6) temporary center capacity
  for (int j = 0; j < s.J; ++j)
    for (int t = 1; t <= s.T; ++t) {
      Row row;
      row.sense = RowSense::LE;
      row.rhs = inst.temporary[j].capacity;
      row.tag = {RowFamily::TempCap, j, t};
      for (int l = 0; l < s.L; ++l)
        for (int p = 0; p < s.P; ++p) push(&row, s.gamma(l, p, t, j), 1.0);
      std::sort(row.coeffs.begin(), row.coeffs.end());
      m.rows.push_back(std::move(row));
    }

  // (7) permanent center capacity
  for (int i = 0; i < s.I; ++i)
    for (int t = 1; t <= s.T; ++t) {
      Row row;
      row.sense = RowSense::LE;
      row.rhs = inst.permanent[i].capacity;
      row.tag = {RowFamily::PermCap, i, t};
      for (int l = 0; l < s.L; ++l)
        for (int p = 0; p < s.P; ++p) push(&row, s.phi(l, p, t, i), 1.0);
      std::sort(row.coeffs.begin(), row.coeffs.end());
      m.rows.push_back(std::move(row));
    }

  // (8) covering
  for (int p = 0; p < s.P; ++p)
    for (int j = 0; j < s.J; ++j)
      for (int t = 1; t <= s.T; ++t)
        for (int l = 0; l < s.L; ++l) {
          Row row;
          row.sense = RowSense::GE;
          row.rhs = 0.0;
          row.tag = {RowFamily::Cover, p, j, t, l};
          for (int r : inst.coverage[l]) push(&row, s.y(j, t, r), 1.0);
          push(&row, s.v(j, p, t, l), -1.0);
          std::sort(row.coeffs.begin(), row.coeffs.end());
          m.rows.push_back(std::move(row));
        }

  // (9) linking, or (16) with the widened big-M
  for (int p = 0; p < s.P; ++p)
    for (int j = 0; j < s.J; ++j)
      for (int l = 0; l < s.L; ++l)
        for (int t = 1; t <= s.T; ++t) {
          double big_m = inst.demand[l][p] + (eta ? (*eta)[l][p] : 0.0);
          Row row;
          row.sense = RowSense::GE;
          row.rhs = 0.0;
          row.tag = {RowFamily::Link, p, j, l, t};
          push(&row, s.gamma(l, p, t, j), -1.0);
          push(&row, s.v(j, p, t, l), big_m);
          std::sort(row.coeffs.begin(), row.coeffs.end());
          m.rows.push_back(std::move(row));
        }

  // (10) placement uniqueness
  for (int j = 0; j < s.J; ++j)
    for (int t = 1; t <= s.T; ++t) {
      Row row;
      row.sense = RowSense::LE;
      row.rhs = 1.0;
      row.tag = {RowFamily::Unique, j, t};
      for (int l = 0; l < s.L; ++l) push(&row, s.y(j, t, l), 1.0);
      std::sort(row.coeffs.begin(), row.coeffs.end());
      m.rows.push_back(std::move(row));
    }

  // objectives
  Objective f1;
  f1.name = "f1";
  f1.sense = ObjSense::Min;
  f1.coeffs.assign(n, 0.0);
  for (int l = 0; l < s.L; ++l)
    for (int p = 0; p < s.P; ++p)
      for (int t = 1; t <= s.T; ++t) {
        double w = priority_weight(inst.groups[p], t);
        for (int i = 0; i < s.I; ++i) f1.coeffs[s.phi(l, p, t, i)] = w;
        for (int j = 0; j < s.J; ++j) f1.coeffs[s.gamma(l, p, t, j)] = w;
      }
  m.objectives.push_back(std::move(f1));

  Objective f2;
  f2.name = "f2";
  f2.sense = ObjSense::Min;
  f2.coeffs.assign(n, 0.0);
  for (int j = 0; j < s.J; ++j)
    for (int t = 1; t <= s.T; ++t)
      for (int l = 0; l < s.L; ++l)
        f2.coeffs[s.y(j, t, l)] = inst.temp_center_cost;
  m.objectives.push_back(std::move(f2));

  if (s.robust) {
    Objective f3;
    f3.name = "f3";
    f3.sense = ObjSense::Max;
    f3.coeffs.assign(n, 0.0);
    for (int l = 0; l < s.L; ++l)
      for (int p = 0; p < s.P; ++p) f3.coeffs[s.gamma_cap(l, p)] = 1.0;
    m.objectives.push_back(std::move(f3));
  }

  CampaignStructure st;
  for (const auto& c : inst.permanent) st.perm_capacity.push_back(c.capacity);
  for (const auto& c : inst.temporary) st.temp_capacity.push_back(c.capacity);
  st.supply = inst.supply;
  st.demand = inst.demand;
  if (eta) st.slack = *eta;
  st.coverage = inst.coverage;
  st.served_by.assign(s.L, {});
  for (int l = 0; l < s.L; ++l)
    for (int r : inst.coverage[l]) st.served_by[r].push_back(l);
  st.weight.assign(s.P, std::vector<double>(s.T, 0.0));
  for (int p = 0; p < s.P; ++p)
    for (int t = 1; t <= s.T; ++t)
      st.weight[p][t - 1] = priority_weight(inst.groups[p], t);
  st.perm_restricted.assign(s.P, 0);
  for (int p = 0; p < s.P; ++p)
    if (inst.groups[p].temporary_only) st.perm_restricted[p] = 1;
  st.temp_center_cost = inst.temp_center_cost;
  m.structure = std::move(st);
  return m;
}

}  // namespace

LinearModel build_baseline(const Instance& inst) {
  auto errs = validate(inst);
  if (!errs.empty()) throw InputError("invalid instance: " + errs.front());
  LinearModel m = build_common(inst, nullptr);
  std::vector<std::string> restricted;
  for (const auto& g : inst.groups)
    if (g.temporary_only) restricted.push_back(g.id);
  if (!restricted.empty()) add_group_restriction(&m, inst, restricted);
  return m;
}

void add_group_restriction(LinearModel* model, const Instance& inst,
                           const std::vector<std::string>& group_ids) {
  const VariableSpace& s = model->vars;
  std::vector<int> ps;
  for (const auto& id : group_ids) {
    int p = inst.group_index(id);
    if (p < 0) throw InputError("unknown group in restriction: " + id);
    ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (int p : ps) {
    for (int t = 1; t <= s.T; ++t)
      for (int i = 0; i < s.I; ++i) {
        Row row;
        row.sense = RowSense::EQ;
        row.rhs = 0.0;
        row.tag = {RowFamily::Restrict, p, t, i};
        for (int l = 0; l < s.L; ++l)
          row.coeffs.emplace_back(s.phi(l, p, t, i), 1.0);
        std::sort(row.coeffs.begin(), row.coeffs.end());
        model->rows.push_back(std::move(row));
      }
    if (model->structure) model->structure->perm_restricted[p] = 1;
  }
}

LinearModel build_robust(const RobustInstance& inst) {
  auto errs = validate(inst);
  if (!errs.empty()) throw InputError("invalid robust instance: " + errs.front());
  LinearModel m = build_common(inst.base, &inst.slack);
  std::vector<std::string> restricted;
  for (const auto& g : inst.base.groups)
    if (g.temporary_only) restricted.push_back(g.id);
  if (!restricted.empty()) add_group_restriction(&m, inst.base, restricted);
  return m;
}

std::string tag_to_string(const LinearModel& model, const RowTag& tag) {
  const VariableSpace& s = model.vars;
  (void)s;
  switch (tag.family) {
    case RowFamily::Supply:
      return "supply[t=" + std::to_string(tag.a) + "]";
    case RowFamily::Demand:
      return "demand[l=" + std::to_string(tag.a) + ",p=" + std::to_string(tag.b) + "]";
    case RowFamily::TempCap:
      return "temp_cap[j=" + std::to_string(tag.a) + ",t=" + std::to_string(tag.b) + "]";
    case RowFamily::PermCap:
      return "perm_cap[i=" + std::to_string(tag.a) + ",t=" + std::to_string(tag.b) + "]";
    case RowFamily::Cover:
      return "cover[p=" + std::to_string(tag.a) + ",j=" + std::to_string(tag.b) +
             ",t=" + std::to_string(tag.c) + ",l=" + std::to_string(tag.d) + "]";
    case RowFamily::Link:
      return "link[p=" + std::to_string(tag.a) + ",j=" + std::to_string(tag.b) +
             ",l=" + std::to_string(tag.c) + ",t=" + std::to_string(tag.d) + "]";
    case RowFamily::Unique:
      return "unique[j=" + std::to_string(tag.a) + ",t=" + std::to_string(tag.b) + "]";
    case RowFamily::Restrict:
      return "restrict[p=" + std::to_string(tag.a) + ",t=" + std::to_string(tag.b) +
             ",i=" + std::to_string(tag.c) + "]";
  }
  return "?";
}

double evaluate_objective(const LinearModel& model, int obj_index,
                          const std::vector<double>& x) {
  const Objective& o = model.objectives.at(obj_index);
  double v = o.offset;
  for (int k = 0; k < model.num_vars(); ++k) v += o.coeffs[k] * x[k];
  return v;
}

double evaluate_row(const Row& row, const std::vector<double>& x) {
  double v = 0.0;
  for (auto [var, coef] : row.coeffs) v += coef * x[var];
  return v;
}

std::vector<std::string> verify_solution(const LinearModel& model,
                                         const std::vector<double>& x,
                                         double tol) {
  std::vector<std::string> out;
  if (static_cast<int>(x.size()) != model.num_vars()) {
    out.push_back("value vector length mismatch");
    return out;
  }
  for (int k = 0; k < model.num_vars(); ++k) {
    if (x[k] < model.lower[k] - tol || x[k] > model.upper[k] + tol)
      out.push_back("bound violated at column " + std::to_string(k));
    if (model.integer[k] && std::fabs(x[k] - std::round(x[k])) > tol)
      out.push_back("integrality violated at column " + std::to_string(k));
  }
  for (const Row& row : model.rows) {
    double v = evaluate_row(row, x);
    bool bad = false;
    switch (row.sense) {
      case RowSense::LE: bad = v > row.rhs + tol; break;
      case RowSense::GE: bad = v < row.rhs - tol; break;
      case RowSense::EQ: bad = std::fabs(v - row.rhs) > tol; break;
    }
    if (bad)
      out.push_back("row violated: " + tag_to_string(model, row.tag) +
                    " value " + std::to_string(v) + " rhs " +
                    std::to_string(row.rhs));
  }
  return out;
}

}  // namespace mmv
