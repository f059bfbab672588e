// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmv/instance.hpp"

namespace mmv {

enum class VarKind { Phi, Gamma, Y, V, GammaCap };

// Bijection between structured indices and flat column ids. Layout order:
// phi(l,p,t,i), gamma(l,p,t,j), y(j,t,l), v(j,p,t,l), Gamma(l,p).
struct VariableSpace {
  int L = 0, P = 0, T = 0, I = 0, J = 0;
  bool robust = false;

  int num_vars() const;
  int phi(int l, int p, int t, int i) const;    // t in 1..T
  int gamma(int l, int p, int t, int j) const;
  int y(int j, int t, int l) const;
  int v(int j, int p, int t, int l) const;
  int gamma_cap(int l, int p) const;

  struct Decoded {
    VarKind kind;
    int l = -1, p = -1, t = -1, i = -1, j = -1;
  };
  Decoded decode(int var) const;
};

enum class RowSense { LE, GE, EQ };

enum class RowFamily {
  Supply,       // (4)  per t
  Demand,       // (5)  per (l,p); robust variant (15)
  TempCap,      // (6)  per (j,t)
  PermCap,      // (7)  per (i,t)
  Cover,        // (8)  per (p,j,t,l)
  Link,         // (9)  per (p,j,l,t); robust variant (16)
  Unique,       // (10) per (j,t)
  Restrict,     // (14) per (p,t,i) for restricted groups
};

struct RowTag {
  RowFamily family;
  int a = -1, b = -1, c = -1, d = -1;
};

struct Row {
  std::vector<std::pair<int, double>> coeffs;  // sorted by column id
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
  RowTag tag{RowFamily::Supply};
};

enum class ObjSense { Min, Max };

struct Objective {
  std::string name;
  ObjSense sense = ObjSense::Min;
  std::vector<double> coeffs;  // dense, one per column
  double offset = 0.0;
};

// Side data the structured solver uses; builders guarantee it matches the
// rows exactly (same construction path).
struct CampaignStructure {
  std::vector<double> perm_capacity;       // C_i
  std::vector<double> temp_capacity;       // D_j
  std::vector<double> supply;              // A_t
  std::vector<std::vector<double>> demand; // pop[l][p] (robust: pop lower bound)
  std::vector<std::vector<double>> slack;  // eta[l][p], robust only
  std::vector<std::vector<int>> coverage;  // N_l
  std::vector<std::vector<int>> served_by; // l's reachable from placement r
  std::vector<std::vector<double>> weight; // w[p][t-1]
  std::vector<char> perm_restricted;       // per group, constraint (14)
  double temp_center_cost = 0.0;
};

struct LinearModel {
  VariableSpace vars;
  std::vector<double> lower, upper;
  std::vector<char> integer;
  std::vector<Row> rows;
  std::vector<Objective> objectives;
  std::optional<CampaignStructure> structure;

  int num_vars() const { return static_cast<int>(lower.size()); }
  int objective_index(const std::string& name) const;  // -1 if absent
};

// Baseline bi-objective model, constraint families (4) to (10).
LinearModel build_baseline(const Instance& inst);

// Adds family (14) rows forcing the listed groups out of permanent centers.
void add_group_restriction(LinearModel* model, const Instance& inst,
                           const std::vector<std::string>& group_ids);

// Robust model: families (4), (15), (6), (7), (8), (16), (10) plus the
// maximized coverage objective f3 over Gamma.
LinearModel build_robust(const RobustInstance& inst);

std::string tag_to_string(const LinearModel& model, const RowTag& tag);

double evaluate_objective(const LinearModel& model, int obj_index,
                          const std::vector<double>& x);
double evaluate_row(const Row& row, const std::vector<double>& x);

// Certificate check: every row within tol, bounds within tol, integer
// variables within tol of an integer. Returns human-readable violations.
std::vector<std::string> verify_solution(const LinearModel& model,
                                         const std::vector<double>& x,
                                         double tol = kFeasTol);

}  // namespace mmv
