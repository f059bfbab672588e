// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "mmv/exact_lp.hpp"

using namespace mmv;

namespace {

ExactBound free_nonneg() { return {0, 0, false}; }
ExactBound boxed(const mpq_class& lo, const mpq_class& hi) {
  return {lo, hi, true};
}

}  // namespace

TEST_CASE("finds the corner of a small polytope") {
  // min -3/2 x - y, x + y <= 4, x <= 3.
  std::vector<ExactRowSpec> rows;
  rows.push_back({{{0, 1}, {1, 1}}, -1, 4});
  rows.push_back({{{0, 1}}, -1, 3});
  auto res = exact_lp_solve(2, rows, {mpq_class(-3, 2), -1},
                            {free_nonneg(), free_nonneg()});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == mpq_class(-11, 2));
  CHECK(res.x[0] == 3);
  CHECK(res.x[1] == 1);
}

TEST_CASE("solves equality systems") {
  // x + y == 5, x - y == 1.
  std::vector<ExactRowSpec> rows;
  rows.push_back({{{0, 1}, {1, 1}}, 0, 5});
  rows.push_back({{{0, 1}, {1, -1}}, 0, 1});
  auto res = exact_lp_solve(2, rows, {1, 1}, {free_nonneg(), free_nonneg()});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == 3);
  CHECK(res.x[1] == 2);
  CHECK(res.objective == 5);
}

TEST_CASE("honors greater-equal rows") {
  // min 2x + 3y, x + y >= 10, x <= 4.
  std::vector<ExactRowSpec> rows;
  rows.push_back({{{0, 1}, {1, 1}}, 1, 10});
  auto res = exact_lp_solve(2, rows, {2, 3},
                            {boxed(0, 4), free_nonneg()});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == 26);
  CHECK(res.x[0] == 4);
  CHECK(res.x[1] == 6);
}

TEST_CASE("detects infeasibility") {
  std::vector<ExactRowSpec> rows;
  rows.push_back({{{0, 1}}, 1, 2});  // x >= 2
  auto res = exact_lp_solve(1, rows, {1}, {boxed(0, 1)});
  CHECK(res.status == LpStatus::Infeasible);
}

TEST_CASE("detects an unbounded ray") {
  auto res = exact_lp_solve(1, {}, {-1}, {free_nonneg()});
  CHECK(res.status == LpStatus::Unbounded);
}

TEST_CASE("upper bounds clip the optimum") {
  auto res = exact_lp_solve(1, {}, {-1}, {boxed(0, mpq_class(7, 2))});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == mpq_class(7, 2));
  CHECK(res.objective == mpq_class(-7, 2));
}

TEST_CASE("answers stay exact rationals") {
  // 3x == 1 has no floating representation; the simplex keeps 1/3.
  std::vector<ExactRowSpec> rows;
  rows.push_back({{{0, 3}}, 0, 1});
  auto res = exact_lp_solve(1, rows, {1}, {free_nonneg()});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == mpq_class(1, 3));
  CHECK(res.objective == mpq_class(1, 3));
}

TEST_CASE("nonzero lower bounds shift the polytope") {
  // min x + y with x >= 2, y in [1, 5], x + y <= 10.
  std::vector<ExactRowSpec> rows;
  rows.push_back({{{0, 1}, {1, 1}}, -1, 10});
  auto res = exact_lp_solve(2, rows, {1, 1},
                            {{2, 0, false}, boxed(1, 5)});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == 3);
  CHECK(res.x[0] == 2);
  CHECK(res.x[1] == 1);
}

TEST_CASE("degenerate ties terminate under Bland pivoting") {
  // Classic cycling-prone structure; Bland's rule must still finish.
  std::vector<ExactRowSpec> rows;
  rows.push_back({{{0, mpq_class(1, 4)}, {1, -8}, {2, -1}, {3, 9}}, -1, 0});
  rows.push_back({{{0, mpq_class(1, 2)}, {1, -12}, {2, mpq_class(-1, 2)}, {3, 3}}, -1, 0});
  rows.push_back({{{2, 1}}, -1, 1});
  auto res = exact_lp_solve(
      4, rows,
      {mpq_class(-3, 4), 150, mpq_class(-1, 50), 6},
      {free_nonneg(), free_nonneg(), free_nonneg(), free_nonneg()});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == mpq_class(-77, 100));
  CHECK(res.x[0] == 1);
  CHECK(res.x[2] == 1);
}
