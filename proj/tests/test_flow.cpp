// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "mmv/flow.hpp"

using namespace mmv;

TEST_CASE("routes a transportation problem at minimum cost") {
  // Two supplies (4, 5) to two demands (3, 6); cheapest assignment is
  // s1->d1 at 1 and s2->d2 at 2, with the s1 remainder to d2 at 3.
  MinCostFlow g;
  int src = g.add_node(), s1 = g.add_node(), s2 = g.add_node();
  int d1 = g.add_node(), d2 = g.add_node(), snk = g.add_node();
  g.add_arc(src, s1, 4, 0);
  g.add_arc(src, s2, 5, 0);
  int a11 = g.add_arc(s1, d1, 10, 1);
  int a12 = g.add_arc(s1, d2, 10, 3);
  int a21 = g.add_arc(s2, d1, 10, 4);
  int a22 = g.add_arc(s2, d2, 10, 2);
  g.add_arc(d1, snk, 3, 0);
  g.add_arc(d2, snk, 6, 0);
  REQUIRE(g.solve(src, snk, 9, false) == MinCostFlow::Status::Optimal);
  CHECK(g.flow_on(a11) == 3.0);
  CHECK(g.flow_on(a12) == 1.0);
  CHECK(g.flow_on(a21) == 0.0);
  CHECK(g.flow_on(a22) == 5.0);
  CHECK(g.total_cost() == doctest::Approx(3 * 1 + 1 * 3 + 5 * 2));
}

TEST_CASE("reports infeasible when capacity falls short") {
  MinCostFlow g;
  int a = g.add_node(), b = g.add_node();
  g.add_arc(a, b, 2, 1);
  CHECK(g.solve(a, b, 3, false) == MinCostFlow::Status::Infeasible);
}

TEST_CASE("handles negative arc costs") {
  // The direct path costs 5; the detour through m costs -1 in total.
  MinCostFlow g;
  int s = g.add_node(), m = g.add_node(), t = g.add_node();
  int direct = g.add_arc(s, t, 10, 5);
  int sm = g.add_arc(s, m, 10, -4);
  int mt = g.add_arc(m, t, 10, 3);
  REQUIRE(g.solve(s, t, 10, false) == MinCostFlow::Status::Optimal);
  CHECK(g.flow_on(direct) == 0.0);
  CHECK(g.flow_on(sm) == 10.0);
  CHECK(g.flow_on(mt) == 10.0);
  CHECK(g.total_cost() == doctest::Approx(-10.0));
}

TEST_CASE("profitable stage keeps pushing while cost is negative") {
  // Nothing is required; the -2 path still carries its 4 units, while the
  // +1 path stays idle.
  MinCostFlow g;
  int s = g.add_node(), t = g.add_node();
  int gain = g.add_arc(s, t, 4, -2);
  int loss = g.add_arc(s, t, 7, 1);
  REQUIRE(g.solve(s, t, 0, true) == MinCostFlow::Status::Optimal);
  CHECK(g.flow_on(gain) == 4.0);
  CHECK(g.flow_on(loss) == 0.0);
  CHECK(g.total_cost() == doctest::Approx(-8.0));
}

TEST_CASE("required and profitable stages compose") {
  // Forced to ship 5 at best cost; the negative arc saturates inside the
  // required stage and the profitable stage finds nothing further.
  MinCostFlow g;
  int s = g.add_node(), t = g.add_node();
  int cheap = g.add_arc(s, t, 3, -1);
  int dear = g.add_arc(s, t, 9, 2);
  REQUIRE(g.solve(s, t, 5, true) == MinCostFlow::Status::Optimal);
  CHECK(g.flow_on(cheap) == 3.0);
  CHECK(g.flow_on(dear) == 2.0);
  CHECK(g.total_cost() == doctest::Approx(-3.0 + 4.0));
}

TEST_CASE("zero requirement with no profitable arcs ships nothing") {
  MinCostFlow g;
  int s = g.add_node(), t = g.add_node();
  int arc = g.add_arc(s, t, 5, 3);
  REQUIRE(g.solve(s, t, 0, true) == MinCostFlow::Status::Optimal);
  CHECK(g.flow_on(arc) == 0.0);
  CHECK(g.total_cost() == 0.0);
}

TEST_CASE("parallel arcs keep distinct handles") {
  MinCostFlow g;
  int s = g.add_node(), t = g.add_node();
  int first = g.add_arc(s, t, 2, 1);
  int second = g.add_arc(s, t, 2, 1);
  REQUIRE(g.solve(s, t, 3, false) == MinCostFlow::Status::Optimal);
  CHECK(g.flow_on(first) + g.flow_on(second) == 3.0);
  CHECK(g.num_nodes() == 2);
}
