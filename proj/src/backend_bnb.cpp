// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "mmv/flow.hpp"
#include "mmv/solve.hpp"

namespace mmv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUseTol = 1e-7;
constexpr int kSlotFree = -2;
constexpr int kSlotClosed = -1;

// Per-unit decomposition of an objective over the campaign structure. Only
// objectives of this shape (uniform service weights, placement-uniform open
// costs, weights on Gamma, no weight on v) fit the flow relaxation.
struct FlowCosts {
  std::vector<std::vector<double>> w;       // [p][t-1], phi and gamma alike
  std::vector<double> open_cost;            // per slot j*T+(t-1)
  std::vector<std::vector<double>> gamma_w; // [l][p] weight on Gamma
  double offset = 0.0;
};

FlowCosts flowize(const LinearModel& m, const Objective& obj) {
  const VariableSpace& vs = m.vars;
  FlowCosts fc;
  fc.offset = obj.offset;
  fc.w.assign(vs.P, std::vector<double>(vs.T, 0.0));
  fc.open_cost.assign(static_cast<std::size_t>(vs.J) * vs.T, 0.0);
  fc.gamma_w.assign(vs.L, std::vector<double>(vs.P, 0.0));
  auto reject = [](const char* what) {
    throw ModelError(std::string("objective does not fit the structured "
                                 "backend: ") +
                     what);
  };
  for (int p = 0; p < vs.P; ++p) {
    for (int t = 1; t <= vs.T; ++t) {
      double base = vs.I > 0 ? obj.coeffs[vs.phi(0, p, t, 0)]
                  : vs.J > 0 ? obj.coeffs[vs.gamma(0, p, t, 0)]
                             : 0.0;
      for (int l = 0; l < vs.L; ++l) {
        for (int i = 0; i < vs.I; ++i)
          if (obj.coeffs[vs.phi(l, p, t, i)] != base)
            reject("service weights vary across centers");
        for (int j = 0; j < vs.J; ++j)
          if (obj.coeffs[vs.gamma(l, p, t, j)] != base)
            reject("service weights vary across centers");
      }
      fc.w[p][t - 1] = base;
    }
  }
  for (int j = 0; j < vs.J; ++j) {
    for (int t = 1; t <= vs.T; ++t) {
      double base = obj.coeffs[vs.y(j, t, 0)];
      for (int l = 1; l < vs.L; ++l)
        if (obj.coeffs[vs.y(j, t, l)] != base)
          reject("open costs vary across placements");
      fc.open_cost[static_cast<std::size_t>(j) * vs.T + (t - 1)] = base;
      for (int p = 0; p < vs.P; ++p)
        for (int l = 0; l < vs.L; ++l)
          if (obj.coeffs[vs.v(j, p, t, l)] != 0.0) reject("weight on v");
    }
  }
  if (vs.robust)
    for (int l = 0; l < vs.L; ++l)
      for (int p = 0; p < vs.P; ++p)
        fc.gamma_w[l][p] = obj.coeffs[vs.gamma_cap(l, p)];
  return fc;
}

struct DemClass {
  std::vector<int> members;   // neighborhood ids, ascending
  int p = 0;
  double pop = 0.0;           // mandatory service (lower bound in robust)
  double slack = 0.0;         // eta, robust only
  std::vector<char> covered;  // covered[r]: placement r serves the class
};

struct Arc {
  enum Kind { Mand, Eta, Over, Perm, SlotIn, SlotOut } kind;
  int handle = -1;
  int cls = -1;
  int t = 0;
  int slot = -1;
  double unit_blend = 0.0;
  double unit_fix = 0.0;
};

struct Relaxation {
  bool feasible = false;
  double blend_value = 0.0;  // objective value of the relaxed solution
  double fix_value = 0.0;    // fix objective at the relaxed solution
  MinCostFlow flow;
  std::vector<Arc> arcs;
  std::vector<double> gamma_const;  // chosen Gamma for eta == 0 pairs
};

struct Node {
  std::vector<std::int16_t> state;  // per slot: free, closed, placement
  double bound = -kInf;
  double lambda = 0.0;
  bool evaluated = false;
  std::int64_t id = 0;
};

struct QueueEntry {
  double bound;
  std::int64_t id;
  bool operator>(const QueueEntry& o) const {
    return bound > o.bound || (bound == o.bound && id > o.id);
  }
};

struct DayGroup {
  int t = 1;
  std::vector<int> slots;  // ascending j, equal capacity and open cost
};

class Engine {
 public:
  Engine(const SolveRequest& req)
      : req_(req), m_(*req.model), vs_(m_.vars), st_(*m_.structure) {
    blend_ = flowize(m_, req.blended);
    if (req.objective_fixes.size() > 1)
      throw ModelError("the structured backend supports one objective fix");
    if (!req.objective_fixes.empty()) {
      const auto& [idx, value] = req.objective_fixes.front();
      if (idx < 0 || idx >= static_cast<int>(m_.objectives.size()))
        throw ModelError("objective fix index out of range");
      fix_ = flowize(m_, m_.objectives[idx]);
      fix_value_ = value;
      has_fix_ = true;
      bool only_y = true;
      for (int p = 0; p < vs_.P && only_y; ++p)
        for (int t = 0; t < vs_.T && only_y; ++t)
          only_y = fix_->w[p][t] == 0.0;
      for (int l = 0; l < vs_.L && only_y; ++l)
        for (int p = 0; p < vs_.P && only_y; ++p)
          only_y = fix_->gamma_w[l][p] == 0.0;
      count_fix_ = only_y;
      if (count_fix_) {
        double unit = 0.0;
        for (double c : fix_->open_cost)
          if (c != 0.0) {
            unit = c;
            break;
          }
        if (unit == 0.0) {
          // All-zero coefficients: the fix constrains nothing, or nothing
          // can meet it.
          if (std::abs(value - fix_->offset) > 1e-6) dead_fix_ = true;
          fix_.reset();
          has_fix_ = false;
          count_fix_ = false;
        } else {
          if (std::any_of(fix_->open_cost.begin(), fix_->open_cost.end(),
                          [&](double c) { return c != unit; }))
            throw ModelError("count fix needs a uniform open cost");
          double k = (value - fix_->offset) / unit;
          count_target_ = static_cast<int>(std::llround(k));
          if (std::abs(k - count_target_) > 1e-6)
            throw ModelError("count fix target is not integral");
        }
      }
    }
    build_classes();
    build_groups();
    over_cap_ = 0.0;
    for (double a : st_.supply) over_cap_ += a;
    perm_cap_total_ = 0.0;
    for (double c : st_.perm_capacity) perm_cap_total_ += c;
    node_limit_ = req.node_limit;
    for (const auto& [key, value] : req.options)
      if (key == "node_limit") node_limit_ = std::stoll(value);
  }

  PlanSolution run();

 private:
  const SolveRequest& req_;
  const LinearModel& m_;
  const VariableSpace& vs_;
  const CampaignStructure& st_;
  FlowCosts blend_;
  std::optional<FlowCosts> fix_;
  double fix_value_ = 0.0;
  bool has_fix_ = false;
  bool count_fix_ = false;
  bool dead_fix_ = false;
  int count_target_ = 0;
  std::vector<DemClass> classes_;
  std::vector<DayGroup> groups_;
  double over_cap_ = 0.0;
  double perm_cap_total_ = 0.0;
  std::chrono::steady_clock::time_point started_;
  double deadline_s_ = 0.0;
  std::int64_t evals_ = 0;
  std::int64_t node_limit_ = 0;

  double slot_cap(int s) const { return st_.temp_capacity[s / vs_.T]; }
  int slot_day(int s) const { return s % vs_.T + 1; }

  void build_classes();
  void build_groups();
  bool relax(const std::vector<std::int16_t>& state, double lambda,
             Relaxation* out);
  double dual_bound(const Relaxation& rel, const std::vector<std::int16_t>& s,
                    double lambda) const;
  bool evaluate(Node* node);
  bool exact_config(const std::vector<std::int16_t>& state, double* value,
                    std::vector<double>* x);
  bool repair(const std::vector<std::int16_t>& state,
              const Relaxation& rel, double* value, std::vector<double>* x);
  std::vector<double> emit(const std::vector<std::int16_t>& state,
                           const Relaxation& rel) const;
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         started_)
        .count();
  }
};

void Engine::build_classes() {
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> foot_members;
  for (int l = 0; l < vs_.L; ++l) {
    std::vector<int> key = st_.coverage[l];
    std::sort(key.begin(), key.end());
    if (vs_.robust) key.push_back(-1 - l);  // keep robust pairs singleton
    auto [it, fresh] = index.insert({key, static_cast<int>(foot_members.size())});
    if (fresh) foot_members.push_back({});
    foot_members[it->second].push_back(l);
  }
  for (std::size_t f = 0; f < foot_members.size(); ++f) {
    for (int p = 0; p < vs_.P; ++p) {
      DemClass cls;
      cls.members = foot_members[f];
      cls.p = p;
      for (int l : cls.members) {
        cls.pop += st_.demand[l][p];
        if (vs_.robust) cls.slack += st_.slack[l][p];
      }
      if (!vs_.robust && cls.pop <= 0.0) continue;
      cls.covered.assign(vs_.L, 0);
      int l0 = cls.members.front();
      for (int r : st_.coverage[l0]) cls.covered[r] = 1;
      classes_.push_back(std::move(cls));
    }
  }
}

void Engine::build_groups() {
  for (int t = 1; t <= vs_.T; ++t) {
    DayGroup* cur = nullptr;
    for (int j = 0; j < vs_.J; ++j) {
      int s = j * vs_.T + (t - 1);
      double d = st_.temp_capacity[j];
      double oc = blend_.open_cost[s];
      double fc = fix_ ? fix_->open_cost[s] : 0.0;
      bool extend = cur != nullptr;
      if (extend) {
        int s0 = cur->slots.front();
        extend = slot_cap(s0) == d && blend_.open_cost[s0] == oc &&
                 (fix_ ? fix_->open_cost[s0] : 0.0) == fc;
      }
      if (!extend) {
        groups_.push_back({t, {}});
        cur = &groups_.back();
      }
      cur->slots.push_back(s);
    }
  }
}

bool Engine::relax(const std::vector<std::int16_t>& state, double lambda,
                   Relaxation* out) {
  ++evals_;
  MinCostFlow& g = out->flow;
  out->arcs.clear();
  out->gamma_const.assign(classes_.size(), 0.0);

  int src = g.add_node();
  int snk = g.add_node();
  std::vector<int> day_node(vs_.T + 1, -1), perm_node(vs_.T + 1, -1);
  for (int t = 1; t <= vs_.T; ++t) {
    day_node[t] = g.add_node();
    g.add_arc(day_node[t], snk, st_.supply[t - 1], 0.0);
    if (vs_.I > 0) {
      perm_node[t] = g.add_node();
      g.add_arc(perm_node[t], day_node[t], perm_cap_total_, 0.0);
    }
  }
  int S = vs_.J * vs_.T;
  std::vector<int> slot_node(S, -1);
  for (int s = 0; s < S; ++s) {
    if (state[s] == kSlotClosed) continue;
    slot_node[s] = g.add_node();
    Arc a;
    a.kind = Arc::SlotOut;
    a.slot = s;
    a.t = slot_day(s);
    a.handle = g.add_arc(slot_node[s], day_node[a.t], slot_cap(s), 0.0);
    out->arcs.push_back(a);
  }

  // Mandatory arcs carry a dominating bonus so min cost routing saturates
  // every class before any slack or over-service flow; a cycle through an
  // unsaturated mandatory arc then always improves, so saturation is exact.
  double maxc = 0.0;
  for (int p = 0; p < vs_.P; ++p)
    for (int t = 0; t < vs_.T; ++t)
      maxc = std::max(maxc, std::abs(blend_.w[p][t] +
                                     (fix_ ? lambda * fix_->w[p][t] : 0.0)));
  for (int s = 0; s < S; ++s) {
    if (state[s] != kSlotFree) continue;
    double amort = (blend_.open_cost[s] +
                    (fix_ ? lambda * fix_->open_cost[s] : 0.0)) /
                   slot_cap(s);
    maxc = std::max(maxc, std::abs(amort));
  }
  for (const DemClass& cls : classes_) {
    if (cls.slack <= 0.0) continue;
    int l = cls.members.front();
    double gb = blend_.gamma_w[l][cls.p] / cls.slack;
    double gf = fix_ ? fix_->gamma_w[l][cls.p] / cls.slack : 0.0;
    maxc = std::max(maxc, std::abs(gb + lambda * gf));
  }
  double big_m =
      (2.0 * (2 + 2 * vs_.T + S + classes_.size()) + 4.0) * (maxc + 1.0);

  double required = 0.0;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    const DemClass& cls = classes_[c];
    int dm = g.add_node();
    auto push_arc = [&](Arc::Kind kind, int to, double cap, double blend_u,
                        double fix_u, int t, int slot, double bias = 0.0) {
      Arc a;
      a.kind = kind;
      a.cls = static_cast<int>(c);
      a.t = t;
      a.slot = slot;
      a.unit_blend = blend_u;
      a.unit_fix = fix_u;
      double cost = blend_u + lambda * fix_u + bias;
      int from = kind == Arc::Mand || kind == Arc::Eta || kind == Arc::Over
                     ? src
                     : dm;
      a.handle = g.add_arc(from, kind == Arc::Mand || kind == Arc::Eta ||
                                         kind == Arc::Over
                                     ? dm
                                     : to,
                           cap, cost);
      out->arcs.push_back(a);
    };
    if (cls.pop > 0.0) {
      push_arc(Arc::Mand, dm, cls.pop, 0.0, 0.0, 0, -1, -big_m);
      required += cls.pop;
    }
    if (cls.slack > 0.0) {
      int l = cls.members.front();
      double gb = blend_.gamma_w[l][cls.p] / cls.slack;
      double gf = fix_ ? fix_->gamma_w[l][cls.p] / cls.slack : 0.0;
      push_arc(Arc::Eta, dm, cls.slack, gb, gf, 0, -1);
    } else if (vs_.robust) {
      int l = cls.members.front();
      double gb = blend_.gamma_w[l][cls.p];
      double gf = fix_ ? fix_->gamma_w[l][cls.p] : 0.0;
      out->gamma_const[c] = gb + lambda * gf < 0.0 ? 1.0 : 0.0;
    }
    push_arc(Arc::Over, dm, over_cap_, 0.0, 0.0, 0, -1);
    bool restricted = cls.p < static_cast<int>(st_.perm_restricted.size()) &&
                      st_.perm_restricted[cls.p];
    for (int t = 1; t <= vs_.T; ++t) {
      double wb = blend_.w[cls.p][t - 1];
      double wf = fix_ ? fix_->w[cls.p][t - 1] : 0.0;
      if (vs_.I > 0 && !restricted)
        push_arc(Arc::Perm, perm_node[t], kInf, wb, wf, t, -1);
      for (int j = 0; j < vs_.J; ++j) {
        int s = j * vs_.T + (t - 1);
        if (state[s] == kSlotClosed) continue;
        if (state[s] >= 0 && !cls.covered[state[s]]) continue;
        double oc = 0.0, of = 0.0;
        if (state[s] == kSlotFree) {
          oc = blend_.open_cost[s] / slot_cap(s);
          of = fix_ ? fix_->open_cost[s] / slot_cap(s) : 0.0;
        }
        push_arc(Arc::SlotIn, slot_node[s], cls.pop + cls.slack, wb + oc,
                 wf + of, t, s);
      }
    }
  }

  auto status = g.solve(src, snk, required, true);
  if (status != MinCostFlow::Status::Optimal) return false;
  for (const Arc& a : out->arcs) {
    if (a.kind != Arc::Mand) continue;
    double pop = classes_[a.cls].pop;
    if (g.flow_on(a.handle) < pop - 1e-6 * std::max(1.0, pop)) return false;
  }

  double blend_val = blend_.offset;
  double fix_val = fix_ ? fix_->offset : 0.0;
  for (const Arc& a : out->arcs) {
    if (a.kind == Arc::SlotOut) continue;
    double f = g.flow_on(a.handle);
    blend_val += f * a.unit_blend;
    fix_val += f * a.unit_fix;
  }
  for (int s = 0; s < S; ++s) {
    if (state[s] < 0) continue;
    blend_val += blend_.open_cost[s];
    if (fix_) fix_val += fix_->open_cost[s];
  }
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (out->gamma_const[c] == 0.0) continue;
    int l = classes_[c].members.front();
    blend_val += blend_.gamma_w[l][classes_[c].p];
    if (fix_) fix_val += fix_->gamma_w[l][classes_[c].p];
  }
  out->feasible = true;
  out->blend_value = blend_val;
  out->fix_value = fix_val;
  return true;
}

double Engine::dual_bound(const Relaxation& rel,
                          const std::vector<std::int16_t>& state,
                          double lambda) const {
  double bound = rel.blend_value + lambda * (rel.fix_value - fix_value_);
  if (has_fix_) return bound;

  // Rounding strengthening: a pure per-open cost admits an integral count.
  bool pure = true;
  for (int p = 0; p < vs_.P && pure; ++p)
    for (int t = 0; t < vs_.T && pure; ++t) pure = blend_.w[p][t] == 0.0;
  for (int l = 0; l < vs_.L && pure; ++l)
    for (int p = 0; p < vs_.P && pure; ++p)
      pure = blend_.gamma_w[l][p] == 0.0;
  if (!pure) return bound;
  double unit = 0.0;
  int committed = 0;
  for (int s = 0; s < vs_.J * vs_.T; ++s) {
    if (state[s] == kSlotClosed) continue;
    double oc = blend_.open_cost[s];
    if (unit == 0.0) unit = oc;
    if (oc != unit || oc <= 0.0) return bound;
    if (state[s] >= 0) ++committed;
  }
  if (unit == 0.0) return bound;
  double frac = 0.0;
  for (const Arc& a : rel.arcs)
    if (a.kind == Arc::SlotIn && state[a.slot] == kSlotFree)
      frac += rel.flow.flow_on(a.handle) / slot_cap(a.slot);
  double strengthened =
      blend_.offset + unit * (committed + std::ceil(frac - 1e-7));
  return std::max(bound, strengthened);
}

// Exact value of a fully decided configuration, including the fix equality
// when present (lambda bisection plus convex combination at a breakpoint).
bool Engine::exact_config(const std::vector<std::int16_t>& state,
                          double* value, std::vector<double>* x) {
  if (count_fix_) {
    int opens = 0;
    for (int s = 0; s < vs_.J * vs_.T; ++s)
      if (state[s] >= 0) ++opens;
    if (opens != count_target_) return false;
  }
  Relaxation rel;
  if (!relax(state, 0.0, &rel)) return false;
  if (!has_fix_ || count_fix_) {
    *value = rel.blend_value;
    *x = emit(state, rel);
    return true;
  }
  double scale = std::max(1.0, std::abs(fix_value_));
  if (std::abs(rel.fix_value - fix_value_) <= 1e-7 * scale) {
    *value = rel.blend_value;
    *x = emit(state, rel);
    return true;
  }
  // fix_value is nonincreasing in lambda; bracket the target.
  double lo = 0.0, hi = 0.0, step = 1.0;
  Relaxation rel_lo, rel_hi;
  bool need_high = rel.fix_value > fix_value_;
  if (need_high) {
    rel_lo = std::move(rel);
    for (hi = step; hi <= 1e9; hi *= 4.0) {
      if (!relax(state, hi, &rel_hi)) return false;
      if (rel_hi.fix_value <= fix_value_) break;
      rel_lo = std::move(rel_hi);
      lo = hi;
    }
    if (hi > 1e9) return false;
  } else {
    rel_hi = std::move(rel);
    for (lo = -step; lo >= -1e9; lo *= 4.0) {
      if (!relax(state, lo, &rel_lo)) return false;
      if (rel_lo.fix_value >= fix_value_) break;
      rel_hi = std::move(rel_lo);
      hi = lo;
    }
    if (lo < -1e9) return false;
  }
  for (int iter = 0; iter < 60; ++iter) {
    if (std::abs(rel_lo.fix_value - fix_value_) <= 1e-9 * scale) break;
    if (std::abs(rel_hi.fix_value - fix_value_) <= 1e-9 * scale) break;
    double mid = 0.5 * (lo + hi);
    Relaxation rel_mid;
    if (!relax(state, mid, &rel_mid)) return false;
    if (rel_mid.fix_value >= fix_value_) {
      lo = mid;
      rel_lo = std::move(rel_mid);
    } else {
      hi = mid;
      rel_hi = std::move(rel_mid);
    }
  }
  if (std::abs(rel_lo.fix_value - fix_value_) <= 1e-9 * scale) {
    *value = rel_lo.blend_value;
    *x = emit(state, rel_lo);
    return true;
  }
  if (std::abs(rel_hi.fix_value - fix_value_) <= 1e-9 * scale) {
    *value = rel_hi.blend_value;
    *x = emit(state, rel_hi);
    return true;
  }
  double span = rel_lo.fix_value - rel_hi.fix_value;
  if (span <= 0.0) return false;
  double theta = (fix_value_ - rel_hi.fix_value) / span;
  theta = std::clamp(theta, 0.0, 1.0);
  std::vector<double> xl = emit(state, rel_lo), xh = emit(state, rel_hi);
  x->resize(xl.size());
  for (std::size_t k = 0; k < xl.size(); ++k)
    (*x)[k] = theta * xl[k] + (1.0 - theta) * xh[k];
  *value = theta * rel_lo.blend_value + (1.0 - theta) * rel_hi.blend_value;
  return true;
}

bool Engine::evaluate(Node* node) {
  if (count_fix_) {
    int committed = 0, free_slots = 0;
    for (auto s : node->state) {
      if (s >= 0) ++committed;
      if (s == kSlotFree) ++free_slots;
    }
    if (committed > count_target_ || committed + free_slots < count_target_)
      return false;
  }
  Relaxation rel;
  double lambda = node->lambda;
  if (!relax(node->state, lambda, &rel)) return false;
  double best = dual_bound(rel, node->state, lambda);
  if (has_fix_) {
    // A few subgradient refinements; any lambda yields a valid bound.
    double step = std::max(1.0, std::abs(lambda));
    for (int iter = 0; iter < 4; ++iter) {
      double sub = rel.fix_value - fix_value_;
      if (std::abs(sub) <= 1e-9 * std::max(1.0, std::abs(fix_value_))) break;
      lambda += sub > 0.0 ? step : -step;
      Relaxation trial;
      if (!relax(node->state, lambda, &trial)) return false;
      double b = dual_bound(trial, node->state, lambda);
      if (b > best + 1e-12) {
        best = b;
        node->lambda = lambda;
        rel = std::move(trial);
      } else {
        lambda = node->lambda;
        step *= 0.5;
      }
    }
  }
  node->bound = best;
  node->evaluated = true;
  return true;
}

std::vector<double> Engine::emit(const std::vector<std::int16_t>& state,
                                 const Relaxation& rel) const {
  std::vector<double> x(m_.num_vars(), 0.0);
  for (int j = 0; j < vs_.J; ++j) {
    for (int t = 1; t <= vs_.T; ++t) {
      int s = j * vs_.T + (t - 1);
      if (state[s] < 0) continue;
      int r = state[s];
      x[vs_.y(j, t, r)] = 1.0;
      for (int l : st_.served_by[r])
        for (int p = 0; p < vs_.P; ++p) x[vs_.v(j, p, t, l)] = 1.0;
    }
  }

  // Per-class service totals by target, then a floors-first split over the
  // member neighborhoods, permanent demand spread over centers by day.
  std::vector<std::vector<double>> perm_left(vs_.T + 1, st_.perm_capacity);
  struct Target {
    int t;
    int slot;  // -1 for permanent
    double amount;
  };
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    const DemClass& cls = classes_[c];
    std::vector<Target> targets;
    double eta_flow = 0.0;
    for (const Arc& a : rel.arcs) {
      if (a.cls != static_cast<int>(c)) continue;
      double f = rel.flow.flow_on(a.handle);
      if (a.kind == Arc::Eta) eta_flow = f;
      if (f <= kUseTol) continue;
      if (a.kind == Arc::Perm) targets.push_back({a.t, -1, f});
      if (a.kind == Arc::SlotIn) targets.push_back({a.t, a.slot, f});
    }
    std::sort(targets.begin(), targets.end(), [](const Target& a,
                                                 const Target& b) {
      if (a.t != b.t) return a.t < b.t;
      return a.slot < b.slot;
    });
    std::vector<double> floor_left(cls.members.size());
    std::vector<double> extra_cap(cls.members.size());
    for (std::size_t k = 0; k < cls.members.size(); ++k) {
      int l = cls.members[k];
      floor_left[k] = st_.demand[l][cls.p];
      extra_cap[k] = vs_.robust ? st_.slack[l][cls.p] : kInf;
    }
    std::vector<std::vector<double>> share(
        targets.size(), std::vector<double>(cls.members.size(), 0.0));
    std::vector<double> slot_cap_left(targets.size());
    for (std::size_t ti = 0; ti < targets.size(); ++ti)
      slot_cap_left[ti] = targets[ti].amount;
    // Floors first; per-slot link caps equal the floors so this never jams.
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      double rem = targets[ti].amount;
      for (std::size_t k = 0; k < cls.members.size() && rem > kUseTol; ++k) {
        double a = std::min(rem, floor_left[k]);
        if (a <= 0.0) continue;
        share[ti][k] += a;
        floor_left[k] -= a;
        rem -= a;
      }
      slot_cap_left[ti] = rem;
    }
    // Leftover flow is over-service; spread wherever headroom remains.
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      double rem = slot_cap_left[ti];
      for (std::size_t k = 0; k < cls.members.size() && rem > kUseTol; ++k) {
        double a = rem;
        if (targets[ti].slot >= 0) {
          int l = cls.members[k];
          double link_cap = st_.demand[l][cls.p] +
                            (vs_.robust ? st_.slack[l][cls.p] : 0.0);
          a = std::min(a, link_cap - share[ti][k]);
        } else if (extra_cap[k] < kInf) {
          a = std::min(a, extra_cap[k]);
        }
        if (a <= 0.0) continue;
        share[ti][k] += a;
        if (extra_cap[k] < kInf) extra_cap[k] -= a;
        rem -= a;
      }
      if (rem > kUseTol && !cls.members.empty() && targets[ti].slot < 0)
        share[ti][0] += rem;  // permanent centers carry any residue
    }
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      const Target& tg = targets[ti];
      for (std::size_t k = 0; k < cls.members.size(); ++k) {
        double a = share[ti][k];
        if (a <= 0.0) continue;
        int l = cls.members[k];
        if (tg.slot >= 0) {
          int j = tg.slot / vs_.T;
          x[vs_.gamma(l, cls.p, tg.t, j)] += a;
        } else {
          for (int i = 0; i < vs_.I && a > 0.0; ++i) {
            double take = std::min(a, perm_left[tg.t][i]);
            if (take <= 0.0) continue;
            x[vs_.phi(l, cls.p, tg.t, i)] += take;
            perm_left[tg.t][i] -= take;
            a -= take;
          }
        }
      }
    }
    if (vs_.robust) {
      int l = cls.members.front();
      double gamma = rel.gamma_const[c];
      if (cls.slack > 0.0) gamma = std::min(1.0, eta_flow / cls.slack);
      x[vs_.gamma_cap(l, cls.p)] = gamma;
    }
  }
  return x;
}

bool Engine::repair(const std::vector<std::int16_t>& state,
                    const Relaxation& rel, double* value,
                    std::vector<double>* x) {
  std::vector<std::int16_t> fixed = state;
  std::vector<double> usage(vs_.J * vs_.T, 0.0);
  std::vector<std::map<int, double>> inflow(vs_.J * vs_.T);
  for (const Arc& a : rel.arcs) {
    if (a.kind != Arc::SlotIn || state[a.slot] != kSlotFree) continue;
    double f = rel.flow.flow_on(a.handle);
    if (f <= kUseTol) continue;
    usage[a.slot] += f;
    inflow[a.slot][a.cls] += f;
  }
  // Identical slots of a day share one flow pool, and every assignment
  // depletes it: slot k serves the strongest placement left after the first
  // k - 1 took theirs, instead of each slot voting on its own mixture.
  for (const DayGroup& grp : groups_) {
    std::map<int, double> pool;
    std::vector<int> free_slots;
    for (int s : grp.slots) {
      if (state[s] != kSlotFree) continue;
      free_slots.push_back(s);
      for (const auto& [c, f] : inflow[s]) pool[c] += f;
    }
    double cap = grp.slots.empty() ? 0.0 : slot_cap(grp.slots.front());
    for (int s : free_slots) {
      double best_cov = 0.0;
      int best_r = -1;
      for (int r = 0; r < vs_.L; ++r) {
        double cov = 0.0;
        for (const auto& [c, f] : pool)
          if (classes_[c].covered[r]) cov += f;
        if (cov > best_cov + kUseTol) {
          best_cov = cov;
          best_r = r;
        }
      }
      if (best_r < 0) {
        fixed[s] = kSlotClosed;
        continue;
      }
      fixed[s] = static_cast<std::int16_t>(best_r);
      double take = std::min(cap, best_cov);
      for (auto& [c, f] : pool) {
        if (!classes_[c].covered[best_r] || take <= 0.0) continue;
        double a = std::min(f, take);
        f -= a;
        take -= a;
      }
    }
  }
  if (count_fix_) {
    int opens = 0;
    for (int s = 0; s < vs_.J * vs_.T; ++s)
      if (fixed[s] >= 0) ++opens;
    std::vector<std::pair<double, int>> order;  // usage asc for closing
    for (int s = 0; s < vs_.J * vs_.T; ++s)
      if (fixed[s] >= 0) order.push_back({usage[s], s});
    std::sort(order.begin(), order.end());
    std::size_t next_close = 0;
    while (opens > count_target_ && next_close < order.size()) {
      fixed[order[next_close++].second] = kSlotClosed;
      --opens;
    }
    for (int s = 0; s < vs_.J * vs_.T && opens < count_target_; ++s) {
      if (fixed[s] != kSlotClosed || state[s] == kSlotClosed) continue;
      fixed[s] = 0;
      ++opens;
    }
    if (opens != count_target_) return false;
  }
  if (exact_config(fixed, value, x)) return true;
  // The pooled greedy can strand a class served by temporary slots alone
  // (a restricted group, or no permanent capacity) with no covering open
  // slot. Hand each starved class spare or lightly used slots, then try
  // the exact flow once more.
  bool moved = false;
  for (const DemClass& cls : classes_) {
    if (cls.pop <= kUseTol) continue;
    bool restricted = cls.p < static_cast<int>(st_.perm_restricted.size()) &&
                      st_.perm_restricted[cls.p];
    if (vs_.I > 0 && perm_cap_total_ > 0.0 && !restricted) continue;
    int r_to = -1;
    for (int r = 0; r < vs_.L; ++r)
      if (cls.covered[r]) {
        r_to = r;
        break;
      }
    if (r_to < 0) return false;
    auto covered_cap = [&]() {
      double cap = 0.0;
      for (int s = 0; s < vs_.J * vs_.T; ++s)
        if (fixed[s] >= 0 && cls.covered[fixed[s]]) cap += slot_cap(s);
      return cap;
    };
    while (covered_cap() < cls.pop - kUseTol) {
      int pick = -1;
      if (!count_fix_) {
        for (int s = 0; s < vs_.J * vs_.T; ++s)
          if (state[s] == kSlotFree && fixed[s] == kSlotClosed) {
            pick = s;
            break;
          }
      }
      if (pick < 0) {
        double pick_use = kInf;
        for (int s = 0; s < vs_.J * vs_.T; ++s) {
          if (state[s] != kSlotFree || fixed[s] < 0) continue;
          if (cls.covered[fixed[s]]) continue;
          if (usage[s] < pick_use) {
            pick_use = usage[s];
            pick = s;
          }
        }
      }
      if (pick < 0) return false;
      fixed[pick] = static_cast<std::int16_t>(r_to);
      moved = true;
    }
  }
  return moved && exact_config(fixed, value, x);
}

PlanSolution Engine::run() {
  started_ = std::chrono::steady_clock::now();
  deadline_s_ = req_.time_limit_s;

  PlanSolution sol;
  sol.backend = "bnb";
  if (dead_fix_) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }

  std::vector<Node> nodes;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                      std::greater<QueueEntry>>
      queue;
  std::int64_t next_id = 0;

  Node root;
  root.state.assign(static_cast<std::size_t>(vs_.J) * vs_.T, kSlotFree);
  root.id = next_id++;
  if (has_fix_ && !count_fix_) root.lambda = 0.0;
  if (!evaluate(&root)) {
    sol.status = SolveStatus::Infeasible;
    sol.runtime_s = elapsed();
    sol.nodes = evals_;
    return sol;
  }
  nodes.push_back(root);
  queue.push({root.bound, root.id});

  bool have_inc = false;
  double inc_value = kInf;
  std::vector<double> inc_x;
  bool timed_out = false;
  double best_open_bound = root.bound;

  // Normalized blends live on the payoff span, so the absolute term plays
  // the role a MIP solver's absolute gap tolerance does on scaled models.
  auto tol_for = [&](double v) {
    return std::max({req_.gap_target * std::max(1.0, std::abs(v)),
                     1e-9 * std::max(1.0, std::abs(v)), 1e-6});
  };

  auto offer = [&](double value, std::vector<double>&& x) {
    double exact = req_.blended.offset;
    for (std::size_t k = 0; k < x.size(); ++k)
      exact += req_.blended.coeffs[k] * x[k];
    (void)value;
    if (!have_inc || exact < inc_value - 1e-12) {
      have_inc = true;
      inc_value = exact;
      inc_x = std::move(x);
    }
  };

  // Strip never-used opens when no fix depends on the count.
  auto polish = [&](std::vector<double>* x) {
    if (has_fix_) return;
    for (int j = 0; j < vs_.J; ++j) {
      for (int t = 1; t <= vs_.T; ++t) {
        double used = 0.0;
        for (int l = 0; l < vs_.L; ++l)
          for (int p = 0; p < vs_.P; ++p)
            used += (*x)[vs_.gamma(l, p, t, j)];
        if (used > kUseTol) continue;
        for (int l = 0; l < vs_.L; ++l) {
          (*x)[vs_.y(j, t, l)] = 0.0;
          for (int p = 0; p < vs_.P; ++p) (*x)[vs_.v(j, p, t, l)] = 0.0;
        }
      }
    }
  };

  std::int64_t pops = 0;
  while (!queue.empty()) {
    if (elapsed() > deadline_s_ ||
        (node_limit_ > 0 && evals_ >= node_limit_)) {
      timed_out = true;
      break;
    }
    QueueEntry top = queue.top();
    queue.pop();
    Node& node = nodes[top.id];
    if (!node.evaluated) {
      if (!evaluate(&node)) continue;  // infeasible under current fixes
      if (!queue.empty() && node.bound > queue.top().bound + 1e-12) {
        queue.push({node.bound, node.id});
        continue;
      }
    }
    best_open_bound = node.bound;
    if (have_inc && node.bound >= inc_value - tol_for(inc_value)) break;

    // Children invalidate the reference into nodes; keep local copies.
    const std::vector<std::int16_t> pstate = node.state;
    const double plambda = node.lambda;
    const double pbound = node.bound;
    nodes[top.id].state.clear();
    nodes[top.id].state.shrink_to_fit();

    Relaxation rel;
    if (!relax(pstate, plambda, &rel)) continue;

    // Branch target: the day group whose free slots carry the most strain.
    int pick_group = -1;
    double pick_score = 0.0;
    int first_free_group = -1;
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
      const DayGroup& grp = groups_[gi];
      bool has_free = false;
      for (int s : grp.slots)
        if (pstate[s] == kSlotFree) has_free = true;
      if (!has_free) continue;
      if (first_free_group < 0) first_free_group = static_cast<int>(gi);
      double usage = 0.0, covered = 0.0, amort_gap = 0.0;
      std::map<int, std::map<int, double>> per_slot;
      for (const Arc& a : rel.arcs) {
        if (a.kind != Arc::SlotIn) continue;
        if (pstate[a.slot] != kSlotFree) continue;
        if (std::find(grp.slots.begin(), grp.slots.end(), a.slot) ==
            grp.slots.end())
          continue;
        double f = rel.flow.flow_on(a.handle);
        if (f <= kUseTol) continue;
        per_slot[a.slot][a.cls] += f;
      }
      for (const auto& [s, by_cls] : per_slot) {
        double u = 0.0, best_cov = 0.0;
        for (const auto& [c, f] : by_cls) u += f;
        for (int r = 0; r < vs_.L; ++r) {
          double cov = 0.0;
          for (const auto& [c, f] : by_cls)
            if (classes_[c].covered[r]) cov += f;
          best_cov = std::max(best_cov, cov);
        }
        usage += u;
        covered += best_cov;
        double oc = blend_.open_cost[s] +
                    plambda * (fix_ ? fix_->open_cost[s] : 0.0);
        if (oc > 0.0) amort_gap += oc * (1.0 - u / slot_cap(s));
      }
      if (usage <= kUseTol) continue;  // unused frees never need branching
      double score = (usage - covered) * 1000.0 + amort_gap;
      if (score > pick_score + 1e-12) {
        pick_score = score;
        pick_group = static_cast<int>(gi);
      }
    }

    bool do_repair = pops % 16 == 0 || !have_inc;
    if (do_repair || pick_group < 0) {
      double val;
      std::vector<double> x;
      if (repair(pstate, rel, &val, &x)) {
        polish(&x);
        offer(val, std::move(x));
      }
    }
    ++pops;

    if (pick_group < 0) {
      // All free slots idle in the relaxation. Without a fix, closing them
      // realizes the bound; with one, keep branching for completeness.
      if (!has_fix_) {
        std::vector<std::int16_t> leaf = pstate;
        for (auto& s : leaf)
          if (s == kSlotFree) s = kSlotClosed;
        double val;
        std::vector<double> x;
        if (exact_config(leaf, &val, &x)) {
          polish(&x);
          offer(val, std::move(x));
        }
        continue;
      }
      if (first_free_group < 0) continue;  // fully decided node
      pick_group = first_free_group;
    }

    const DayGroup& grp = groups_[pick_group];
    int branch_slot = -1;
    int min_class = 0;
    for (int s : grp.slots) {
      if (pstate[s] == kSlotFree && branch_slot < 0) branch_slot = s;
      if (pstate[s] >= 0 && branch_slot < 0) min_class = pstate[s];
    }
    if (branch_slot < 0) continue;

    // Canonical children: close the whole free tail, or open the first free
    // slot at a placement no earlier than the previous open one.
    {
      Node child;
      child.state = pstate;
      for (int s : grp.slots)
        if (child.state[s] == kSlotFree) child.state[s] = kSlotClosed;
      child.bound = pbound;
      child.lambda = plambda;
      child.id = next_id++;
      nodes.push_back(std::move(child));
      queue.push({pbound, next_id - 1});
    }
    std::vector<int> reps;
    {
      std::map<std::vector<int>, int> seen;
      for (int r = 0; r < vs_.L; ++r) {
        std::vector<int> key = st_.served_by[r];
        if (seen.insert({key, r}).second && r >= min_class)
          reps.push_back(r);
      }
    }
    for (int r : reps) {
      Node child;
      child.state = pstate;
      child.state[branch_slot] = static_cast<std::int16_t>(r);
      child.bound = pbound;
      child.lambda = plambda;
      child.id = next_id++;
      nodes.push_back(std::move(child));
      queue.push({pbound, next_id - 1});
    }
  }

  sol.nodes = evals_;
  sol.runtime_s = elapsed();
  double bound = best_open_bound;
  if (!timed_out && queue.empty()) bound = have_inc ? inc_value : kInf;
  if (have_inc) {
    sol.x = std::move(inc_x);
    sol.objective = inc_value;
    sol.best_bound = std::min(bound, inc_value);
    sol.gap = std::max(0.0, inc_value - sol.best_bound) /
              std::max(1.0, std::abs(inc_value));
    bool proven = !timed_out &&
                  (queue.empty() ||
                   bound >= inc_value - tol_for(inc_value));
    sol.status = proven ? SolveStatus::Optimal : SolveStatus::Feasible;
    if (proven) {
      sol.best_bound = inc_value;
      sol.gap = 0.0;
    }
  } else if (timed_out) {
    sol.status = SolveStatus::NoSolution;
    sol.best_bound = bound;
    sol.gap = kInf;
  } else {
    sol.status = SolveStatus::Infeasible;
  }
  return sol;
}

}  // namespace

PlanSolution solve_bnb(const SolveRequest& req) {
  if (req.model == nullptr) throw ModelError("solve request has no model");
  if (!req.model->structure)
    throw ModelError("model lacks campaign structure");
  if (req.blended.sense != ObjSense::Min)
    throw ModelError("blended objective must minimize");
  if (static_cast<int>(req.blended.coeffs.size()) != req.model->num_vars())
    throw ModelError("blended objective size mismatch");
  Engine engine(req);
  return engine.run();
}

}  // namespace mmv
