// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmv/instance.hpp"

namespace mmv {

// Knobs for the shipped generators. Negative (or empty) fields keep the
// scenario default; supply has no default for the illustrative scenario and
// must be given there.
struct ScenarioConfig {
  std::string scenario;               // "illustrative", "s1", "s2"
  std::vector<double> supply;         // A_t; a single value broadcasts
  std::vector<double> perm_capacity;  // replaces the default center list
  double temp_capacity = -1.0;        // D_j
  int temp_count = -1;
  double temp_center_cost = -1.0;     // mc
  int horizon = -1;
  bool has_seed = false;              // required for s1/s2
  std::uint64_t seed = 0;
  double demand_scale = 1.0;          // scales total demand before rounding
};

Instance gen_illustrative(const ScenarioConfig& config);
Instance gen_san_bernardo(const ScenarioConfig& config);

// Dispatch on config.scenario.
Instance generate(const ScenarioConfig& config);

}  // namespace mmv
