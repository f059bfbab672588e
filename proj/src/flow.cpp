// SPDX-License-Identifier: Apache-2.0

#include "mmv/flow.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace mmv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFlowTol = 1e-9;
}

int MinCostFlow::add_node() {
  first_.push_back(-1);
  return static_cast<int>(first_.size()) - 1;
}

int MinCostFlow::add_arc(int from, int to, double capacity, double cost) {
  int id = static_cast<int>(edges_.size());
  edges_.push_back({to, capacity, cost, first_[from]});
  first_[from] = id;
  edges_.push_back({from, 0.0, -cost, first_[to]});
  first_[to] = id + 1;
  return id;
}

void MinCostFlow::init_potentials(int source) {
  // Bellman-Ford over residual arcs with positive capacity.
  int n = num_nodes();
  potential_.assign(n, kInf);
  potential_[source] = 0.0;
  for (int pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (int u = 0; u < n; ++u) {
      if (potential_[u] == kInf) continue;
      for (int e = first_[u]; e != -1; e = edges_[e].next) {
        if (edges_[e].cap <= kFlowTol) continue;
        double nd = potential_[u] + edges_[e].cost;
        if (nd < potential_[edges_[e].to] - 1e-15) {
          potential_[edges_[e].to] = nd;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  for (double& p : potential_)
    if (p == kInf) p = 0.0;
}

bool MinCostFlow::dijkstra(int source, int sink) {
  int n = num_nodes();
  dist_.assign(n, kInf);
  prev_edge_.assign(n, -1);
  visited_.assign(n, 0);
  dist_[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (visited_[u]) continue;
    visited_[u] = 1;
    for (int e = first_[u]; e != -1; e = edges_[e].next) {
      const Edge& ed = edges_[e];
      if (ed.cap <= kFlowTol || visited_[ed.to]) continue;
      double rc = ed.cost + potential_[u] - potential_[ed.to];
      if (rc < 0.0) rc = 0.0;  // guard tiny negative round-off
      double nd = d + rc;
      if (nd < dist_[ed.to] - 1e-15) {
        dist_[ed.to] = nd;
        prev_edge_[ed.to] = e;
        pq.push({nd, ed.to});
      }
    }
  }
  if (dist_[sink] == kInf) return false;
  for (int u = 0; u < n; ++u)
    if (dist_[u] < kInf) potential_[u] += dist_[u];
  return true;
}

MinCostFlow::Status MinCostFlow::solve(int source, int sink, double required,
                                       bool then_profitable) {
  init_potentials(source);
  double remaining = required;
  while (remaining > kFlowTol) {
    if (!dijkstra(source, sink)) return Status::Infeasible;
    double push = remaining;
    for (int v = sink; v != source;) {
      int e = prev_edge_[v];
      push = std::min(push, edges_[e].cap);
      v = edges_[e ^ 1].to;
    }
    for (int v = sink; v != source;) {
      int e = prev_edge_[v];
      edges_[e].cap -= push;
      edges_[e ^ 1].cap += push;
      v = edges_[e ^ 1].to;
    }
    remaining -= push;
  }
  if (then_profitable) {
    for (;;) {
      if (!dijkstra(source, sink)) break;
      // true marginal cost of the found path
      double path_cost = 0.0;
      double push = kInf;
      for (int v = sink; v != source;) {
        int e = prev_edge_[v];
        path_cost += edges_[e].cost;
        push = std::min(push, edges_[e].cap);
        v = edges_[e ^ 1].to;
      }
      if (path_cost >= -1e-10 || push <= kFlowTol) break;
      for (int v = sink; v != source;) {
        int e = prev_edge_[v];
        edges_[e].cap -= push;
        edges_[e ^ 1].cap += push;
        v = edges_[e ^ 1].to;
      }
    }
  }
  return Status::Optimal;
}

double MinCostFlow::flow_on(int arc) const {
  return edges_[arc ^ 1].cap;
}

double MinCostFlow::total_cost() const {
  double c = 0.0;
  for (size_t e = 0; e < edges_.size(); e += 2)
    c += edges_[e].cost * edges_[e ^ 1].cap;
  return c;
}

}  // namespace mmv
