// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mmv/common.hpp"
#include "mmv/instance.hpp"

namespace mmvtest {

// Small random campaign that stays inside the oracle's size budget
// (J*T*L <= 20 slot choices, P*J*T*L <= 64 cover variables).
inline mmv::Instance tiny_instance(std::uint64_t seed,
                                   bool ensure_feasible = false) {
  mmv::SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x5851f42d4c957f2dULL);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  };
  int L = pick(1, 3);
  int P = pick(1, 2);
  int J = pick(0, 2);
  int T = pick(1, 3);
  int I = pick(0, 2);
  if (I == 0 && J == 0) J = 1;

  mmv::Instance inst;
  inst.name = "tiny" + std::to_string(seed);
  inst.horizon = T;
  const double costs[] = {10.0, 50.0, 350.0};
  inst.temp_center_cost = costs[rng.below(3)];
  inst.macrozones = {"Z1"};
  inst.zone_members.emplace_back();
  for (int l = 0; l < L; ++l) inst.zone_members[0].push_back(l);
  for (int l = 0; l < L; ++l) {
    inst.neighborhoods.push_back("N" + std::to_string(l + 1));
    std::vector<int> cov{l};
    int extra = pick(1, 2);
    for (int k = 0; k < extra; ++k) cov.push_back(pick(0, L - 1));
    std::sort(cov.begin(), cov.end());
    cov.erase(std::unique(cov.begin(), cov.end()), cov.end());
    inst.coverage.push_back(cov);
    std::vector<double> row;
    for (int p = 0; p < P; ++p) row.push_back(static_cast<double>(pick(0, 6)));
    inst.demand.push_back(row);
  }
  for (int p = 0; p < P; ++p) {
    mmv::Group g;
    g.id = "G" + std::to_string(p + 1);
    g.risk = std::round((0.1 + 0.8 * rng.unit()) * 100.0) / 100.0;
    g.eps = std::round(0.1 * rng.unit() * 1000.0) / 1000.0;
    inst.groups.push_back(g);
  }
  for (int i = 0; i < I; ++i)
    inst.permanent.push_back(
        {"P" + std::to_string(i + 1), static_cast<double>(pick(2, 8))});
  for (int j = 0; j < J; ++j)
    inst.temporary.push_back(
        {"T" + std::to_string(j + 1), static_cast<double>(pick(2, 6))});

  double total = inst.total_demand();
  inst.supply.assign(T, 0.0);
  double shipped = 0.0;
  for (int t = 0; t < T; ++t) {
    inst.supply[t] = std::max(1.0, std::floor(total / T) + pick(0, 4));
    shipped += inst.supply[t];
  }
  if (shipped < total) inst.supply[T - 1] += total - shipped;

  if (ensure_feasible) {
    // A high-capacity permanent center plus ample supply guarantees a plan
    // that ignores the temporary network entirely.
    inst.permanent.push_back({"P0", std::max(1.0, std::ceil(total / T)) + 2.0});
    for (double& a : inst.supply) a += 2.0;
  }
  return inst;
}

}  // namespace mmvtest
