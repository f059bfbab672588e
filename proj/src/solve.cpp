// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string>

#include "mmv/solve.hpp"

namespace mmv {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Feasible:
      return "feasible-gap";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::NoSolution:
      return "time-limit-no-solution";
  }
  return "unknown";
}

std::vector<std::string> backend_names() { return {"bnb", "oracle"}; }

PlanSolution solve(const SolveRequest& req, const std::string& backend) {
  std::string name = backend;
  if (name.empty()) {
    const char* env = std::getenv("MMV_BACKEND");
    name = env != nullptr && *env != '\0' ? env : "bnb";
  }
  SolveRequest local = req;
  if (local.time_limit_s <= 0.0) {
    local.time_limit_s = 120.0;
    if (const char* env = std::getenv("MMV_TIME_LIMIT")) {
      char* end = nullptr;
      double v = std::strtod(env, &end);
      if (end != env && v > 0.0) local.time_limit_s = v;
    }
  }

  PlanSolution sol;
  if (name == "bnb") {
    sol = solve_bnb(local);
  } else if (name == "oracle") {
    sol = solve_oracle(local);
  } else {
    throw InputError("unknown backend: " + name);
  }

  if (sol.status == SolveStatus::Optimal ||
      sol.status == SolveStatus::Feasible) {
    auto violations = verify_solution(*req.model, sol.x);
    if (!violations.empty())
      throw ModelError("certificate failure: " + violations.front());
    for (std::size_t k = 0; k < req.model->objectives.size(); ++k)
      sol.objective_values.emplace_back(
          req.model->objectives[k].name,
          evaluate_objective(*req.model, static_cast<int>(k), sol.x));
  }
  sol.backend = name;
  return sol;
}

}  // namespace mmv
