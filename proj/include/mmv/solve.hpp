// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mmv/model.hpp"

namespace mmv {

enum class SolveStatus { Optimal, Feasible, Infeasible, NoSolution };

std::string to_string(SolveStatus s);

struct SolveRequest {
  const LinearModel* model = nullptr;
  Objective blended;  // minimization form, offset included
  double time_limit_s = 120.0;
  double gap_target = 0.0;  // relative
  std::uint64_t seed = 0;   // recorded for reproducibility bookkeeping
  // Deterministic cap on relaxation evaluations (0 = unlimited). Unlike the
  // wall clock limit, hitting it reproduces the same incumbent every run.
  std::int64_t node_limit = 0;
  // Lex payoff support: pairs (objective index, required value). The engine
  // restricts the search to solutions whose objective equals the value.
  std::vector<std::pair<int, double>> objective_fixes;
  // Backend tuning passthrough; unknown keys are ignored.
  std::vector<std::pair<std::string, std::string>> options;
};

struct PlanSolution {
  SolveStatus status = SolveStatus::NoSolution;
  std::vector<double> x;
  double objective = 0.0;   // blended value, offset included
  double best_bound = 0.0;
  double gap = 0.0;         // relative, 0 for proven optima
  double runtime_s = 0.0;
  std::int64_t nodes = 0;
  std::string backend;
  // Raw model objectives (f1, f2, f3) evaluated at x, in model order.
  std::vector<std::pair<std::string, double>> objective_values;
};

using SolveFn = std::function<PlanSolution(const SolveRequest&)>;

// Structured branch and bound over the campaign model (default backend).
PlanSolution solve_bnb(const SolveRequest& req);

// Exhaustive placement enumeration with exact rational inner LPs. Ground
// truth for tiny instances; refuses models beyond the size caps.
PlanSolution solve_oracle(const SolveRequest& req);
bool oracle_supports(const LinearModel& model);

// Dispatch by backend name ("bnb", "oracle"); empty name consults the
// MMV_BACKEND environment variable and falls back to "bnb". Solutions with
// status Optimal or Feasible are certificate-checked before returning.
PlanSolution solve(const SolveRequest& req, const std::string& backend = "");

std::vector<std::string> backend_names();

}  // namespace mmv
