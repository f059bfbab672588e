// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "mmv/exact_lp.hpp"
#include "mmv/solve.hpp"

namespace mmv {
namespace {

constexpr long kMaxSlotChoices = 20;   // |J| * |T| * |L|
constexpr long kMaxCoverVars = 64;     // |P| * |J| * |T| * |L|

struct Slot {
  int j = 0;
  int t = 1;
  double capacity = 0.0;
  double open_cost = 0.0;    // blended coefficient on y, identical over l
  bool sym_with_prev = false;  // interchangeable with the preceding slot
};

struct FixSpec {
  bool pure_binary = false;
  double value = 0.0;
  std::vector<std::pair<int, double>> bin_coeffs;   // var -> coeff
  std::vector<std::pair<int, mpq_class>> cont_row;  // col -> coeff
};

struct Ctx {
  const LinearModel* model = nullptr;
  const Objective* blended = nullptr;
  std::vector<int> cont_vars;          // model var ids, ascending
  std::vector<int> col_of;             // model var -> col or -1
  std::vector<Slot> slots;             // ordered by (t, j)
  std::vector<std::vector<char>> serves;  // serves[l][r]: r covers l
  std::vector<FixSpec> fixes;
  std::vector<ExactBound> bounds;
  std::vector<mpq_class> cost;
  mpq_class alloc_lb;                  // relaxed continuous minimum
  double rem_min_all = 0.0;            // sum of min(0, open_cost)
};

mpq_class to_rational(double v) {
  if (!std::isfinite(v)) throw ModelError("non-finite coefficient");
  return mpq_class(v);
}

int slot_index(const Ctx& ctx, int j, int t) {
  for (std::size_t s = 0; s < ctx.slots.size(); ++s)
    if (ctx.slots[s].j == j && ctx.slots[s].t == t) return static_cast<int>(s);
  return -1;
}

Ctx prepare(const SolveRequest& req) {
  Ctx ctx;
  ctx.model = req.model;
  ctx.blended = &req.blended;
  const LinearModel& m = *req.model;
  const VariableSpace& vs = m.vars;

  ctx.col_of.assign(m.num_vars(), -1);
  for (int var = 0; var < m.num_vars(); ++var) {
    if (m.integer[var]) continue;
    ctx.col_of[var] = static_cast<int>(ctx.cont_vars.size());
    ctx.cont_vars.push_back(var);
  }

  // Slots in day-major order so same-day siblings sit next to each other.
  std::map<std::pair<int, int>, double> temp_cap;
  for (const Row& row : m.rows)
    if (row.tag.family == RowFamily::TempCap)
      temp_cap[{row.tag.b, row.tag.a}] = row.rhs;  // key (t, j)
  for (int t = 1; t <= vs.T; ++t) {
    for (int j = 0; j < vs.J; ++j) {
      Slot slot;
      slot.j = j;
      slot.t = t;
      auto it = temp_cap.find({t, j});
      slot.capacity = it == temp_cap.end()
                          ? std::numeric_limits<double>::infinity()
                          : it->second;
      slot.open_cost = req.blended.coeffs[vs.y(j, t, 0)];
      for (int l = 1; l < vs.L; ++l) {
        double c = req.blended.coeffs[vs.y(j, t, l)];
        if (std::abs(c - slot.open_cost) > 1e-12)
          throw ModelError("oracle requires placement-uniform open costs");
      }
      ctx.rem_min_all += std::min(0.0, slot.open_cost);
      if (!ctx.slots.empty()) {
        const Slot& prev = ctx.slots.back();
        if (prev.t == slot.t && prev.capacity == slot.capacity &&
            prev.open_cost == slot.open_cost) {
          bool same = true;
          for (int l = 0; same && l < vs.L; ++l)
            for (int p = 0; same && p < vs.P; ++p)
              same = req.blended.coeffs[vs.gamma(l, p, slot.t, prev.j)] ==
                     req.blended.coeffs[vs.gamma(l, p, slot.t, slot.j)];
          slot.sym_with_prev = same;
        }
      }
      ctx.slots.push_back(slot);
    }
  }

  for (int var = 0; var < m.num_vars(); ++var) {
    if (!m.integer[var]) continue;
    auto d = vs.decode(var);
    if (d.kind == VarKind::V && std::abs(req.blended.coeffs[var]) > 1e-12)
      throw ModelError("oracle requires zero objective weight on v");
  }

  // Coverage from the cover rows themselves.
  ctx.serves.assign(vs.L, std::vector<char>(vs.L, 0));
  for (const Row& row : m.rows) {
    if (row.tag.family != RowFamily::Cover) continue;
    int l = row.tag.d;
    for (const auto& [var, coef] : row.coeffs) {
      auto d = vs.decode(var);
      if (d.kind == VarKind::Y && coef > 0.5) ctx.serves[l][d.l] = 1;
    }
  }

  for (const auto& [obj_index, value] : req.objective_fixes) {
    if (obj_index < 0 || obj_index >= static_cast<int>(m.objectives.size()))
      throw ModelError("objective fix index out of range");
    FixSpec fix;
    fix.value = value;
    const Objective& obj = m.objectives[obj_index];
    for (int var = 0; var < m.num_vars(); ++var) {
      double c = obj.coeffs[var];
      if (c == 0.0) continue;
      if (m.integer[var])
        fix.bin_coeffs.push_back({var, c});
      else
        fix.cont_row.push_back({ctx.col_of[var], to_rational(c)});
    }
    fix.pure_binary = fix.cont_row.empty();
    ctx.fixes.push_back(std::move(fix));

    for (Slot& slot : ctx.slots) {
      if (!slot.sym_with_prev) continue;
      int prev_j = slot.j;  // recover the preceding same-day slot
      for (const Slot& other : ctx.slots)
        if (other.t == slot.t && other.j < slot.j) prev_j = other.j;
      bool same = true;
      for (int l = 0; same && l < vs.L; ++l)
        for (int p = 0; same && p < vs.P; ++p)
          same = obj.coeffs[vs.gamma(l, p, slot.t, prev_j)] ==
                 obj.coeffs[vs.gamma(l, p, slot.t, slot.j)];
      for (int l = 0; same && l < vs.L; ++l) {
        double base = obj.coeffs[vs.y(prev_j, slot.t, l)];
        same = obj.coeffs[vs.y(slot.j, slot.t, l)] == base;
      }
      if (!same) slot.sym_with_prev = false;
    }
  }

  ctx.bounds.resize(ctx.cont_vars.size());
  ctx.cost.resize(ctx.cont_vars.size());
  for (std::size_t c = 0; c < ctx.cont_vars.size(); ++c) {
    int var = ctx.cont_vars[c];
    ctx.bounds[c].lower = to_rational(m.lower[var]);
    if (std::isfinite(m.upper[var])) {
      ctx.bounds[c].has_upper = true;
      ctx.bounds[c].upper = to_rational(m.upper[var]);
    }
    ctx.cost[c] = to_rational(req.blended.coeffs[var]);
  }
  return ctx;
}

// Minimum of the continuous part over the rows that mention no binaries;
// dropping the rest only enlarges the feasible set.
bool compute_alloc_lb(Ctx* ctx) {
  std::vector<ExactRowSpec> rows;
  for (const Row& row : ctx->model->rows) {
    bool pure = true;
    for (const auto& [var, coef] : row.coeffs) {
      (void)coef;
      if (ctx->model->integer[var]) {
        pure = false;
        break;
      }
    }
    if (!pure) continue;
    ExactRowSpec spec;
    for (const auto& [var, coef] : row.coeffs)
      spec.coeffs.push_back({ctx->col_of[var], to_rational(coef)});
    spec.sense = row.sense == RowSense::LE ? -1
               : row.sense == RowSense::GE ? +1
                                           : 0;
    spec.rhs = to_rational(row.rhs);
    rows.push_back(std::move(spec));
  }
  auto res = exact_lp_solve(static_cast<int>(ctx->cont_vars.size()), rows,
                            ctx->cost, ctx->bounds);
  if (res.status == LpStatus::Infeasible) return false;
  ctx->alloc_lb = res.status == LpStatus::Optimal
                      ? res.objective
                      : mpq_class(-1000000000);
  return true;
}

struct PatternEval {
  bool feasible = false;
  mpq_class total;  // objective including offset
  std::vector<mpq_class> x;
};

PatternEval evaluate_pattern(const Ctx& ctx, const std::vector<int>& choice) {
  const LinearModel& m = *ctx.model;
  const VariableSpace& vs = m.vars;
  PatternEval out;

  auto binary_value = [&](int var) -> int {
    auto d = vs.decode(var);
    if (d.kind == VarKind::Y) {
      int s = slot_index(ctx, d.j, d.t);
      return choice[s] == d.l ? 1 : 0;
    }
    int s = slot_index(ctx, d.j, d.t);
    int r = choice[s];
    return r >= 0 && ctx.serves[d.l][r] ? 1 : 0;  // v follows coverage
  };

  std::vector<ExactRowSpec> rows;
  for (const Row& row : m.rows) {
    ExactRowSpec spec;
    mpq_class shift = 0;
    for (const auto& [var, coef] : row.coeffs) {
      if (m.integer[var]) {
        if (int bv = binary_value(var); bv != 0)
          shift += to_rational(coef) * bv;
      } else {
        spec.coeffs.push_back({ctx.col_of[var], to_rational(coef)});
      }
    }
    mpq_class rhs = to_rational(row.rhs) - shift;
    if (spec.coeffs.empty()) {
      bool ok = row.sense == RowSense::LE   ? rhs >= 0
                : row.sense == RowSense::GE ? rhs <= 0
                                            : rhs == 0;
      if (!ok) return out;
      continue;
    }
    spec.sense = row.sense == RowSense::LE ? -1
               : row.sense == RowSense::GE ? +1
                                           : 0;
    spec.rhs = rhs;
    rows.push_back(std::move(spec));
  }

  mpq_class constant = to_rational(ctx.blended->offset);
  for (int var = 0; var < m.num_vars(); ++var) {
    if (!m.integer[var]) continue;
    double c = ctx.blended->coeffs[var];
    if (c == 0.0) continue;
    if (int bv = binary_value(var); bv != 0) constant += to_rational(c) * bv;
  }

  for (const FixSpec& fix : ctx.fixes) {
    mpq_class bin_part = 0;
    for (const auto& [var, coef] : fix.bin_coeffs)
      bin_part += to_rational(coef) * binary_value(var);
    if (fix.pure_binary) {
      double gap = std::abs(mpq_get_d(bin_part.get_mpq_t()) - fix.value);
      if (gap > 1e-6 * std::max(1.0, std::abs(fix.value))) return out;
      continue;
    }
    ExactRowSpec spec;
    spec.coeffs = fix.cont_row;
    spec.sense = 0;
    spec.rhs = to_rational(fix.value) - bin_part;
    rows.push_back(std::move(spec));
  }

  auto res = exact_lp_solve(static_cast<int>(ctx.cont_vars.size()), rows,
                            ctx.cost, ctx.bounds);
  if (res.status == LpStatus::Unbounded)
    throw ModelError("blended objective unbounded");
  if (res.status != LpStatus::Optimal) return out;
  out.feasible = true;
  out.total = res.objective + constant;
  out.x = std::move(res.x);
  return out;
}

}  // namespace

bool oracle_supports(const LinearModel& model) {
  const VariableSpace& vs = model.vars;
  long slots = static_cast<long>(vs.J) * vs.T;
  return slots * vs.L <= kMaxSlotChoices &&
         static_cast<long>(vs.P) * slots * vs.L <= kMaxCoverVars;
}

PlanSolution solve_oracle(const SolveRequest& req) {
  auto started = std::chrono::steady_clock::now();
  if (req.model == nullptr) throw ModelError("solve request has no model");
  const LinearModel& m = *req.model;
  if (req.blended.sense != ObjSense::Min)
    throw ModelError("blended objective must minimize");
  if (static_cast<int>(req.blended.coeffs.size()) != m.num_vars())
    throw ModelError("blended objective size mismatch");
  if (!oracle_supports(m)) throw ModelError("instance too large for the oracle");

  PlanSolution sol;
  sol.backend = "oracle";

  Ctx ctx = prepare(req);
  if (!compute_alloc_lb(&ctx)) {
    sol.status = SolveStatus::Infeasible;
    sol.runtime_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    return sol;
  }

  const int S = static_cast<int>(ctx.slots.size());
  const int L = m.vars.L;
  std::vector<int> choice(S, -1), best_choice;
  bool have_best = false;
  mpq_class best_total;
  std::vector<mpq_class> best_x;
  std::int64_t evals = 0;
  bool timed_out = false;

  double deadline = req.time_limit_s;
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         started)
        .count();
  };

  // Ranks order closed after every placement so equal same-day slots can be
  // forced into a canonical nondecreasing sequence.
  auto rank_of = [&](int c) { return c < 0 ? L : c; };

  std::function<void(int, mpq_class, double)> recurse =
      [&](int s, mpq_class committed, double rem_min) {
        if (timed_out) return;
        if ((evals & 63) == 0 && elapsed() > deadline) {
          timed_out = true;
          return;
        }
        if (have_best) {
          mpq_class lb = committed + to_rational(rem_min) + ctx.alloc_lb +
                         to_rational(ctx.blended->offset);
          if (lb >= best_total) return;
        }
        if (s == S) {
          ++evals;
          PatternEval ev = evaluate_pattern(ctx, choice);
          if (!ev.feasible) return;
          if (!have_best || ev.total < best_total) {
            have_best = true;
            best_total = ev.total;
            best_choice = choice;
            best_x = std::move(ev.x);
          }
          return;
        }
        const Slot& slot = ctx.slots[s];
        double rem_after = rem_min - std::min(0.0, slot.open_cost);
        int min_rank = 0;
        if (slot.sym_with_prev) min_rank = rank_of(choice[s - 1]);
        // Closed first: with nonnegative open costs that surfaces cheap
        // incumbents early and sharpens the pruning bound.
        choice[s] = -1;
        recurse(s + 1, committed, rem_after);
        for (int r = 0; r < L; ++r) {
          if (rank_of(r) < min_rank) continue;
          choice[s] = r;
          recurse(s + 1, committed + to_rational(slot.open_cost), rem_after);
        }
        choice[s] = -1;
      };

  recurse(0, mpq_class(0), ctx.rem_min_all);

  sol.nodes = evals;
  sol.runtime_s = elapsed();
  if (!have_best) {
    sol.status = timed_out ? SolveStatus::NoSolution : SolveStatus::Infeasible;
    if (timed_out) {
      sol.best_bound = mpq_get_d(ctx.alloc_lb.get_mpq_t()) + ctx.rem_min_all +
                       req.blended.offset;
      sol.gap = std::numeric_limits<double>::infinity();
    }
    return sol;
  }

  sol.x.assign(m.num_vars(), 0.0);
  for (int var = 0; var < m.num_vars(); ++var) {
    if (m.integer[var]) {
      auto d = m.vars.decode(var);
      int s = slot_index(ctx, d.j, d.t);
      int r = best_choice[s];
      if (d.kind == VarKind::Y)
        sol.x[var] = r == d.l ? 1.0 : 0.0;
      else
        sol.x[var] = (r >= 0 && ctx.serves[d.l][r]) ? 1.0 : 0.0;
    } else {
      sol.x[var] = mpq_get_d(best_x[ctx.col_of[var]].get_mpq_t());
    }
  }
  sol.objective = mpq_get_d(best_total.get_mpq_t());
  if (timed_out) {
    sol.status = SolveStatus::Feasible;
    sol.best_bound = mpq_get_d(ctx.alloc_lb.get_mpq_t()) + ctx.rem_min_all +
                     req.blended.offset;
    sol.gap = std::abs(sol.objective - sol.best_bound) /
              std::max(1.0, std::abs(sol.objective));
  } else {
    sol.status = SolveStatus::Optimal;
    sol.best_bound = sol.objective;
    sol.gap = 0.0;
  }
  return sol;
}

}  // namespace mmv
