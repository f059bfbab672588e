// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mmv/common.hpp"

namespace mmv {

struct Group {
  std::string id;
  double risk = 0.0;        // r_p in [0, 1)
  double eps = 0.0;         // daily risk variation, >= 0
  bool temporary_only = false;
};

struct Center {
  std::string id;
  double capacity = 0.0;    // vaccines per day
};

// A planning instance. Neighborhoods are indexed globally 0..L-1 in the
// order they appear inside their macrozones; demand and coverage use that
// indexing. All monetary and head counts are nonnegative.
struct Instance {
  std::string name;
  std::vector<std::string> macrozones;              // K
  std::vector<std::vector<int>> zone_members;       // L_k, global indices
  std::vector<std::string> neighborhoods;           // id per global index
  int horizon = 0;                                  // |T|, days 1..horizon
  std::vector<Group> groups;                        // P
  std::vector<Center> permanent;                    // I
  std::vector<Center> temporary;                    // J
  std::vector<std::vector<int>> coverage;           // N_l per neighborhood
  std::vector<double> supply;                       // A_t, size horizon
  std::vector<std::vector<double>> demand;          // pop[l][p]
  double temp_center_cost = 0.0;                    // mc

  int num_zones() const { return static_cast<int>(macrozones.size()); }
  int num_neighborhoods() const { return static_cast<int>(neighborhoods.size()); }
  int num_groups() const { return static_cast<int>(groups.size()); }
  int num_permanent() const { return static_cast<int>(permanent.size()); }
  int num_temporary() const { return static_cast<int>(temporary.size()); }

  double total_demand() const;
  double total_permanent_capacity() const;
  int neighborhood_index(const std::string& id) const;  // -1 if unknown
  int group_index(const std::string& id) const;         // -1 if unknown
};

// Robust variant: base.demand holds the guaranteed lower demand pop^LB and
// slack holds the additional uncertain demand eta, both indexed [l][p].
struct RobustInstance {
  Instance base;
  std::vector<std::vector<double>> slack;
};

// Returns human-readable violations, sorted, empty when the instance is
// well formed. Checks structural consistency, ranges, and coverage shape.
std::vector<std::string> validate(const Instance& inst);
std::vector<std::string> validate(const RobustInstance& inst);

// (1 - r) * (1 + eps)^day for day >= 1.
double priority_weight(double risk, double eps, int day);
double priority_weight(const Group& g, int day);

// Lower bound, in percent of total demand, on the share that must be served
// by temporary centers given permanent capacity alone: supply unconstrained,
// max(0, (sum pop - |T| * sum C_i) / sum pop) * 100.
double temp_share_lower_bound(const Instance& inst);

}  // namespace mmv
