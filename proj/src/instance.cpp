// SPDX-License-Identifier: Apache-2.0

#include "mmv/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mmv {

bool relatively_equal(double a, double b, double rel_tol) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= rel_tol * scale;
}

double Instance::total_demand() const {
  double s = 0.0;
  for (const auto& row : demand)
    for (double v : row) s += v;
  return s;
}

double Instance::total_permanent_capacity() const {
  double s = 0.0;
  for (const auto& c : permanent) s += c.capacity;
  return s;
}

int Instance::neighborhood_index(const std::string& id) const {
  for (int l = 0; l < num_neighborhoods(); ++l)
    if (neighborhoods[l] == id) return l;
  return -1;
}

int Instance::group_index(const std::string& id) const {
  for (int p = 0; p < num_groups(); ++p)
    if (groups[p].id == id) return p;
  return -1;
}

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_centers(const std::vector<Center>& cs, const char* kind,
                   std::vector<std::string>* out) {
  std::set<std::string> seen;
  for (const auto& c : cs) {
    if (c.id.empty())
      out->push_back(std::string(kind) + " center with empty id");
    if (!seen.insert(c.id).second)
      out->push_back(std::string(kind) + " center id duplicated: " + c.id);
    if (!finite_nonneg(c.capacity))
      out->push_back(std::string(kind) + " center capacity negative: " + c.id);
  }
}

}  // namespace

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  const int L = inst.num_neighborhoods();
  const int P = inst.num_groups();

  if (inst.horizon < 1) out.push_back("horizon must be at least 1");
  if (inst.macrozones.empty()) out.push_back("no macrozones defined");
  if (L == 0) out.push_back("no neighborhoods defined");
  if (P == 0) out.push_back("no groups defined");

  if (static_cast<int>(inst.zone_members.size()) != inst.num_zones()) {
    out.push_back("zone membership list does not match macrozone count");
  } else {
    std::vector<int> owner(L, -1);
    for (int k = 0; k < inst.num_zones(); ++k) {
      for (int l : inst.zone_members[k]) {
        if (l < 0 || l >= L) {
          out.push_back("macrozone " + inst.macrozones[k] +
                        " references unknown neighborhood index");
        } else if (owner[l] != -1) {
          out.push_back("neighborhood " + inst.neighborhoods[l] +
                        " assigned to more than one macrozone");
        } else {
          owner[l] = k;
        }
      }
    }
    for (int l = 0; l < L; ++l)
      if (owner[l] == -1)
        out.push_back("neighborhood " + inst.neighborhoods[l] +
                      " not assigned to any macrozone");
  }

  {
    std::set<std::string> seen;
    for (const auto& id : inst.neighborhoods)
      if (!seen.insert(id).second)
        out.push_back("neighborhood id duplicated: " + id);
  }
  {
    std::set<std::string> seen;
    for (const auto& g : inst.groups) {
      if (!seen.insert(g.id).second)
        out.push_back("group id duplicated: " + g.id);
      if (!(g.risk >= 0.0 && g.risk < 1.0))
        out.push_back("group " + g.id + " risk outside [0, 1)");
      if (!finite_nonneg(g.eps))
        out.push_back("group " + g.id + " eps negative");
    }
  }

  check_centers(inst.permanent, "permanent", &out);
  check_centers(inst.temporary, "temporary", &out);

  if (static_cast<int>(inst.supply.size()) != inst.horizon)
    out.push_back("supply must list one value per day of the horizon");
  for (double a : inst.supply)
    if (!finite_nonneg(a)) out.push_back("supply value negative");

  if (static_cast<int>(inst.coverage.size()) != L) {
    out.push_back("coverage must list one set per neighborhood");
  } else {
    for (int l = 0; l < L; ++l) {
      bool self = false;
      std::set<int> seen;
      for (int r : inst.coverage[l]) {
        if (r < 0 || r >= L) {
          out.push_back("coverage of " + inst.neighborhoods[l] +
                        " references unknown neighborhood index");
          continue;
        }
        if (!seen.insert(r).second)
          out.push_back("coverage of " + inst.neighborhoods[l] +
                        " lists a neighborhood twice");
        if (r == l) self = true;
      }
      if (!self)
        out.push_back("coverage of " + inst.neighborhoods[l] +
                      " does not include the neighborhood itself");
    }
  }

  if (static_cast<int>(inst.demand.size()) != L) {
    out.push_back("demand must list one row per neighborhood");
  } else {
    for (int l = 0; l < L; ++l) {
      if (static_cast<int>(inst.demand[l].size()) != P) {
        out.push_back("demand row of " + inst.neighborhoods[l] +
                      " does not match the group count");
        continue;
      }
      for (int p = 0; p < P; ++p)
        if (!finite_nonneg(inst.demand[l][p]))
          out.push_back("demand negative at " + inst.neighborhoods[l] + "/" +
                        inst.groups[p].id);
    }
  }

  if (!finite_nonneg(inst.temp_center_cost))
    out.push_back("temporary center cost negative");

  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> validate(const RobustInstance& inst) {
  std::vector<std::string> out = validate(inst.base);
  const int L = inst.base.num_neighborhoods();
  const int P = inst.base.num_groups();
  if (static_cast<int>(inst.slack.size()) != L) {
    out.push_back("slack must list one row per neighborhood");
  } else {
    for (int l = 0; l < L; ++l) {
      if (static_cast<int>(inst.slack[l].size()) != P) {
        out.push_back("slack row of " + inst.base.neighborhoods[l] +
                      " does not match the group count");
        continue;
      }
      for (int p = 0; p < P; ++p)
        if (!finite_nonneg(inst.slack[l][p]))
          out.push_back("slack negative at " + inst.base.neighborhoods[l] +
                        "/" + inst.base.groups[p].id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double priority_weight(double risk, double eps, int day) {
  if (day < 1) throw InputError("priority weight day must be at least 1");
  if (!(risk >= 0.0 && risk < 1.0)) throw InputError("risk outside [0, 1)");
  if (!finite_nonneg(eps)) throw InputError("eps must be nonnegative");
  return (1.0 - risk) * std::pow(1.0 + eps, day);
}

double priority_weight(const Group& g, int day) {
  return priority_weight(g.risk, g.eps, day);
}

double temp_share_lower_bound(const Instance& inst) {
  double pop = inst.total_demand();
  if (pop <= 0.0) throw InputError("total demand is zero");
  double perm = inst.horizon * inst.total_permanent_capacity();
  return std::max(0.0, (pop - perm) / pop) * 100.0;
}

}  // namespace mmv
