// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace mmv {

// Successive-shortest-path min cost flow on a directed graph. Handles
// negative arc costs (graphs without negative cycles) via Bellman-Ford
// potential initialization. Two-stage solve: route a required amount from
// source to sink at minimum cost, then optionally keep augmenting while the
// marginal path cost stays negative.
class MinCostFlow {
 public:
  int add_node();
  // Returns an arc handle for flow_on(); capacity must be >= 0.
  int add_arc(int from, int to, double capacity, double cost);

  enum class Status { Optimal, Infeasible };

  Status solve(int source, int sink, double required, bool then_profitable);

  double flow_on(int arc) const;
  double total_cost() const;
  int num_nodes() const { return static_cast<int>(first_.size()); }

 private:
  struct Edge {
    int to;
    double cap;     // residual capacity
    double cost;
    int next;
  };
  std::vector<Edge> edges_;
  std::vector<int> first_;
  std::vector<double> potential_, dist_;
  std::vector<int> prev_edge_;
  std::vector<char> visited_;

  bool dijkstra(int source, int sink);
  void init_potentials(int source);
};

}  // namespace mmv
