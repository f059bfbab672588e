// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <vector>

namespace mmv {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct ExactRowSpec {
  std::vector<std::pair<int, mpq_class>> coeffs;
  int sense = 0;  // -1: <=, 0: ==, +1: >=
  mpq_class rhs;
};

struct ExactBound {
  mpq_class lower;
  mpq_class upper;   // meaningful only when has_upper
  bool has_upper = false;
};

struct ExactLpResult {
  LpStatus status = LpStatus::Infeasible;
  mpq_class objective;
  std::vector<mpq_class> x;
};

// Minimizes c over the polyhedron; exact rational arithmetic throughout,
// bounded-variable two-phase simplex with Bland pivoting.
ExactLpResult exact_lp_solve(int num_vars,
                             const std::vector<ExactRowSpec>& rows,
                             const std::vector<mpq_class>& cost,
                             const std::vector<ExactBound>& bounds);

}  // namespace mmv
