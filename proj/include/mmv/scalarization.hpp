// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mmv/solve.hpp"

namespace mmv {

// Min-max normalization anchors from the lexicographic payoff table: best is
// the objective's own optimum, worst the bleakest value it takes across the
// other objectives' lexicographic optima.
struct ObjectiveBounds {
  std::string name;
  double best = 0.0;
  double worst = 0.0;
};

struct Bounds {
  std::vector<ObjectiveBounds> per_objective;  // order follows the model
};

Bounds compute_bounds(const LinearModel& model, const std::string& backend = "",
                      double time_limit_s = 0.0);

// Weighted blend of the normalized objectives as a single minimization.
// Baseline: alpha on f1, (1-alpha) on f2. Robust: (1-alpha)/2 on each cost
// objective minus alpha on the normalized coverage objective. A degenerate
// normalization span drops its term.
Objective blend(const LinearModel& model, const Bounds& bounds, double alpha);

struct SweepPoint {
  double alpha = 0.0;
  PlanSolution solution;
  std::vector<double> raw;         // objective values at the solution
  std::vector<double> normalized;  // same order, degenerate spans give 0
};

struct SweepResult {
  Bounds bounds;
  std::vector<SweepPoint> points;
};

std::vector<double> default_alpha_grid();

SweepResult sweep(const LinearModel& model, const std::vector<double>& alphas,
                  const std::string& backend = "", double time_limit_s = 0.0,
                  double gap_target = 0.0, std::int64_t node_limit = 0);

// Ground-truth convenience: builds the baseline model for the instance,
// blends it with the given bounds, and solves with the exact oracle.
PlanSolution oracle_solve(const Instance& inst, double alpha,
                          const Bounds& bounds, double time_limit_s = 0.0);

}  // namespace mmv
