// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mmv/scenarios.hpp"

namespace mmv {
namespace {

// Integer largest-remainder apportionment: exact, order-stable, no floating
// point. Ties go to the smaller index.
std::vector<long long> largest_remainder(const std::vector<long long>& weights,
                                         long long total) {
  long long wsum = std::accumulate(weights.begin(), weights.end(), 0LL);
  std::size_t n = weights.size();
  std::vector<long long> out(n, 0), rem(n, 0);
  if (wsum <= 0 || total <= 0) return out;
  long long assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long long prod = weights[i] * total;
    out[i] = prod / wsum;
    rem[i] = prod % wsum;
    assigned += out[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (long long k = 0; k < total - assigned; ++k) out[order[k]] += 1;
  return out;
}

std::string pad2(int v) {
  return (v < 10 ? "0" : "") + std::to_string(v);
}

std::vector<double> resolve_supply(const ScenarioConfig& config,
                                   double fallback, int horizon) {
  std::vector<double> supply = config.supply;
  if (supply.empty()) {
    if (fallback < 0.0)
      throw InputError(
          "the illustrative scenario does not define a vaccine supply; pass "
          "one (constant or one value per day)");
    supply.assign(horizon, fallback);
  } else if (supply.size() == 1) {
    supply.assign(horizon, supply[0]);
  } else if (static_cast<int>(supply.size()) != horizon) {
    throw InputError("supply override must have 1 or horizon entries");
  }
  for (double a : supply)
    if (a < 0.0) throw InputError("supply entries must be nonnegative");
  return supply;
}

void apply_center_overrides(const ScenarioConfig& config, Instance* inst,
                            double default_temp_capacity) {
  if (!config.perm_capacity.empty()) {
    inst->permanent.clear();
    for (std::size_t i = 0; i < config.perm_capacity.size(); ++i) {
      if (config.perm_capacity[i] < 0.0)
        throw InputError("permanent capacities must be nonnegative");
      inst->permanent.push_back(
          {"I" + pad2(static_cast<int>(i) + 1), config.perm_capacity[i]});
    }
  }
  int count = config.temp_count >= 0 ? config.temp_count : 5;
  double cap = config.temp_capacity >= 0.0 ? config.temp_capacity
                                           : default_temp_capacity;
  inst->temporary.clear();
  for (int j = 0; j < count; ++j)
    inst->temporary.push_back({"J" + std::to_string(j + 1), cap});
  if (config.temp_center_cost >= 0.0)
    inst->temp_center_cost = config.temp_center_cost;
}

long long scaled_total(long long base, double scale) {
  if (scale <= 0.0) throw InputError("demand scale must be positive");
  return std::llround(static_cast<double>(base) * scale);
}

}  // namespace

Instance gen_illustrative(const ScenarioConfig& config) {
  // 4 macrozones in rows of 5 neighborhoods; coverage reaches the in-row
  // neighbors and the same column in the adjacent rows.
  constexpr int kZones = 4, kPerZone = 5;
  constexpr int kHoods = kZones * kPerZone;
  // Group totals A, B, C with fixed zone and neighborhood proportions; the
  // per-neighborhood table below is their largest-remainder apportionment.
  const long long group_totals[3] = {3657, 3906, 4051};
  const long long zone_w[kZones] = {35, 28, 22, 15};
  const long long hood_w[kPerZone] = {30, 25, 20, 15, 10};

  Instance inst;
  inst.name = "illustrative";
  inst.horizon = config.horizon > 0 ? config.horizon : 20;
  inst.groups = {{"A", 0.8, 0.06, false},
                 {"B", 0.5, 0.025, false},
                 {"C", 0.28, 0.015, false}};
  for (int k = 0; k < kZones; ++k) {
    inst.macrozones.push_back("Z" + std::to_string(k + 1));
    std::vector<int> members;
    for (int c = 0; c < kPerZone; ++c) members.push_back(k * kPerZone + c);
    inst.zone_members.push_back(members);
  }
  for (int l = 0; l < kHoods; ++l)
    inst.neighborhoods.push_back("N" + std::to_string(l + 1));
  for (int l = 0; l < kHoods; ++l) {
    int row = l / kPerZone, col = l % kPerZone;
    std::vector<int> cover = {l};
    if (col > 0) cover.push_back(l - 1);
    if (col + 1 < kPerZone) cover.push_back(l + 1);
    if (row > 0) cover.push_back(l - kPerZone);
    if (row + 1 < kZones) cover.push_back(l + kPerZone);
    std::sort(cover.begin(), cover.end());
    inst.coverage.push_back(cover);
  }

  std::vector<long long> weights;
  for (long long zw : zone_w)
    for (long long hw : hood_w) weights.push_back(zw * hw);
  inst.demand.assign(kHoods, std::vector<double>(3, 0.0));
  for (int p = 0; p < 3; ++p) {
    auto split = largest_remainder(
        weights, scaled_total(group_totals[p], config.demand_scale));
    for (int l = 0; l < kHoods; ++l)
      inst.demand[l][p] = static_cast<double>(split[l]);
  }

  for (int i = 0; i < kZones; ++i)
    inst.permanent.push_back({"I" + std::to_string(i + 1), 150.0});
  inst.temp_center_cost = 350.0;
  apply_center_overrides(config, &inst, 37.0);
  inst.supply = resolve_supply(config, -1.0, inst.horizon);
  return inst;
}

Instance gen_san_bernardo(const ScenarioConfig& config) {
  if (config.scenario != "s1" && config.scenario != "s2")
    throw InputError("unknown scenario id: " + config.scenario);
  if (!config.has_seed)
    throw InputError("scenarios s1 and s2 require a seed");
  bool s1 = config.scenario == "s1";

  // 2017 pre-census macrozone populations, stragglers excluded.
  struct Zone { const char* name; long long census; };
  const Zone zones[] = {
      {"OHiggins", 5100},          {"EscuelaDeInfanteria", 9204},
      {"CalderonDeLaBarca", 14182}, {"SantaMarta", 16403},
      {"Hospital", 18994},          {"CerroNegro", 79725},
      {"Maestranza", 11681},        {"Nos", 38492},
      {"Nogales", 14387},           {"TejasDeChena", 17591},
      {"Chena", 21150},             {"LoHerrera", 7051},
      {"Estacion", 12915},          {"LosMorros", 29730},
  };
  constexpr int kZones = 14, kPerZone = 5, kGroups = 5;
  const long long split_w[kPerZone] = {30, 25, 20, 15, 10};
  const long long group_w[kGroups] = {20, 30, 3, 25, 22};
  const double risk[kGroups] = {0.8, 0.65, 0.5, 0.35, 0.2};
  const double eps[kGroups] = {0.06, 0.033, 0.022, 0.015, 0.010};

  Instance inst;
  inst.name = config.scenario;
  inst.horizon = config.horizon > 0 ? config.horizon : 90;
  for (int p = 0; p < kGroups; ++p)
    inst.groups.push_back(
        {std::string(1, static_cast<char>('A' + p)), risk[p], eps[p], false});

  std::vector<long long> census;
  for (const Zone& z : zones) census.push_back(z.census);
  auto zone_pop =
      largest_remainder(census, scaled_total(115800, config.demand_scale));

  inst.demand.assign(kZones * kPerZone, std::vector<double>(kGroups, 0.0));
  for (int k = 0; k < kZones; ++k) {
    inst.macrozones.push_back("Z" + pad2(k + 1) + "-" + zones[k].name);
    std::vector<int> members;
    for (int c = 0; c < kPerZone; ++c) {
      int l = k * kPerZone + c;
      members.push_back(l);
      inst.neighborhoods.push_back("Z" + pad2(k + 1) + "-N" +
                                   std::to_string(c + 1));
    }
    inst.zone_members.push_back(members);

    // Seeded per-zone shuffle of the split proportions.
    std::vector<long long> w(split_w, split_w + kPerZone);
    SplitMix64 rng(config.seed * 0x9e3779b97f4a7c15ULL + k);
    for (int c = kPerZone - 1; c > 0; --c)
      std::swap(w[c], w[rng.below(c + 1)]);
    auto hood_pop = largest_remainder(w, zone_pop[k]);
    for (int c = 0; c < kPerZone; ++c) {
      auto by_group = largest_remainder(
          std::vector<long long>(group_w, group_w + kGroups), hood_pop[c]);
      for (int p = 0; p < kGroups; ++p)
        inst.demand[members[c]][p] = static_cast<double>(by_group[p]);
    }
  }

  // Coverage: a temporary center serves its whole macrozone.
  for (int k = 0; k < kZones; ++k)
    for (int c = 0; c < kPerZone; ++c) inst.coverage.push_back(inst.zone_members[k]);

  // Permanent centers, one per primary health center; capacities chosen to
  // meet the scenario totals (623 and 1,000).
  for (int i = 0; i < kZones; ++i) {
    double cap = s1 ? (i < 7 ? 45.0 : 44.0) : (i < 6 ? 72.0 : 71.0);
    inst.permanent.push_back({"I" + pad2(i + 1), cap});
  }
  inst.temp_center_cost = 350.0;
  apply_center_overrides(config, &inst, 200.0);
  inst.supply = resolve_supply(config, s1 ? 1800.0 : 2000.0, inst.horizon);
  return inst;
}

Instance generate(const ScenarioConfig& config) {
  if (config.scenario == "illustrative") return gen_illustrative(config);
  if (config.scenario == "s1" || config.scenario == "s2")
    return gen_san_bernardo(config);
  throw InputError("unknown scenario id: " + config.scenario);
}

}  // namespace mmv
