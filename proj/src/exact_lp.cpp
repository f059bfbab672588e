// SPDX-License-Identifier: Apache-2.0

#include "mmv/exact_lp.hpp"

#include <cassert>

namespace mmv {

namespace {

// Dense bounded-variable simplex state. Columns: structural vars, then one
// slack per row, then one artificial per row (artificials created lazily).
struct Simplex {
  int m = 0, n = 0;
  std::vector<std::vector<mpq_class>> M;  // m x n transformed matrix
  std::vector<mpq_class> beta;            // A_B^{-1} b
  std::vector<mpq_class> lb, ub;
  std::vector<char> has_ub;
  std::vector<int> basis;                 // column basic in each row
  std::vector<char> in_basis;
  std::vector<char> at_upper;             // nonbasic rest position

  std::vector<mpq_class> values() const {
    std::vector<mpq_class> x(n, 0);
    for (int j = 0; j < n; ++j)
      if (!in_basis[j]) x[j] = at_upper[j] ? ub[j] : lb[j];
    for (int r = 0; r < m; ++r) {
      mpq_class v = beta[r];
      for (int j = 0; j < n; ++j)
        if (!in_basis[j] && x[j] != 0) v -= M[r][j] * x[j];
      x[basis[r]] = v;
    }
    return x;
  }

  // One simplex phase on the given cost vector. Returns false when the
  // objective is unbounded below.
  bool optimize(const std::vector<mpq_class>& c) {
    for (;;) {
      std::vector<mpq_class> x = values();
      // reduced costs d = c - c_B M
      std::vector<mpq_class> d(c);
      for (int r = 0; r < m; ++r) {
        const mpq_class& cb = c[basis[r]];
        if (cb == 0) continue;
        for (int j = 0; j < n; ++j)
          if (M[r][j] != 0) d[j] -= cb * M[r][j];
      }
      int enter = -1, dir = 0;
      for (int j = 0; j < n; ++j) {
        if (in_basis[j]) continue;
        if (lb[j] == ub[j] && has_ub[j]) continue;
        if (!at_upper[j] && d[j] < 0) { enter = j; dir = 1; break; }
        if (at_upper[j] && d[j] > 0) { enter = j; dir = -1; break; }
      }
      if (enter < 0) return true;

      // ratio test along +-e_enter; basic values move by -dir * M[r][enter]
      bool limited = false;
      mpq_class best_delta;
      int leave_row = -1, leave_to_upper = 0;
      if (has_ub[enter]) {
        best_delta = ub[enter] - lb[enter];
        limited = true;
      }
      for (int r = 0; r < m; ++r) {
        mpq_class rate = -M[r][enter] * dir;  // change of basic r per unit
        if (rate == 0) continue;
        int bj = basis[r];
        mpq_class room;
        int to_upper;
        if (rate < 0) {
          room = x[bj] - lb[bj];
          to_upper = 0;
        } else {
          if (!has_ub[bj]) continue;
          room = ub[bj] - x[bj];
          to_upper = 1;
        }
        mpq_class delta = room / abs(rate);
        if (!limited || delta < best_delta ||
            (delta == best_delta && leave_row >= 0 &&
             basis[r] < basis[leave_row])) {
          limited = true;
          best_delta = delta;
          leave_row = r;
          leave_to_upper = to_upper;
        }
      }
      if (!limited) return false;  // unbounded

      if (leave_row < 0) {
        // bound flip, no basis change
        at_upper[enter] = !at_upper[enter];
        continue;
      }
      // pivot: enter becomes basic in leave_row
      int leave = basis[leave_row];
      mpq_class piv = M[leave_row][enter];
      assert(piv != 0);
      for (int j = 0; j < n; ++j) M[leave_row][j] /= piv;
      beta[leave_row] /= piv;
      for (int r = 0; r < m; ++r) {
        if (r == leave_row) continue;
        mpq_class f = M[r][enter];
        if (f == 0) continue;
        for (int j = 0; j < n; ++j)
          if (M[leave_row][j] != 0) M[r][j] -= f * M[leave_row][j];
        beta[r] -= f * beta[leave_row];
      }
      in_basis[leave] = 0;
      at_upper[leave] = leave_to_upper;
      in_basis[enter] = 1;
      at_upper[enter] = 0;
      basis[leave_row] = enter;
    }
  }
};

}  // namespace

ExactLpResult exact_lp_solve(int num_vars,
                             const std::vector<ExactRowSpec>& rows,
                             const std::vector<mpq_class>& cost,
                             const std::vector<ExactBound>& bounds) {
  const int m = static_cast<int>(rows.size());
  Simplex s;
  s.m = m;
  s.n = num_vars + 2 * m;  // slacks and artificials
  s.M.assign(m, std::vector<mpq_class>(s.n, 0));
  s.beta.assign(m, 0);
  s.lb.assign(s.n, 0);
  s.ub.assign(s.n, 0);
  s.has_ub.assign(s.n, 0);
  s.in_basis.assign(s.n, 0);
  s.at_upper.assign(s.n, 0);
  s.basis.assign(m, -1);

  for (int j = 0; j < num_vars; ++j) {
    s.lb[j] = bounds[j].lower;
    s.has_ub[j] = bounds[j].has_upper;
    if (bounds[j].has_upper) s.ub[j] = bounds[j].upper;
  }
  for (int r = 0; r < m; ++r) {
    for (auto& [var, coef] : rows[r].coeffs) s.M[r][var] = coef;
    s.beta[r] = rows[r].rhs;
    int slack = num_vars + r;
    s.M[r][slack] = 1;
    if (rows[r].sense < 0) {            // <= : slack in [0, inf)
      s.lb[slack] = 0;
    } else if (rows[r].sense > 0) {     // >= : slack in (-inf, 0]
      s.lb[slack] = mpq_class(-1);      // placeholder, replaced below
      s.has_ub[slack] = 1;
      s.ub[slack] = 0;
      s.lb[slack] = 0;                  // tightened after feasibility setup
    } else {                            // == : slack fixed at 0
      s.has_ub[slack] = 1;
    }
  }

  // GE slacks really live in (-inf, 0]; emulate with negated slack column.
  for (int r = 0; r < m; ++r) {
    if (rows[r].sense > 0) {
      int slack = num_vars + r;
      s.M[r][slack] = -1;  // a x - s = b with s >= 0
      s.has_ub[slack] = 0;
      s.ub[slack] = 0;
      s.lb[slack] = 0;
    }
  }

  // initial rest position: structural vars at lower bound
  // artificial per row absorbs the residual
  std::vector<mpq_class> x0(s.n, 0);
  for (int j = 0; j < s.n; ++j) x0[j] = s.lb[j];
  std::vector<mpq_class> phase1(s.n, 0);
  for (int r = 0; r < m; ++r) {
    mpq_class act = 0;
    for (int j = 0; j < num_vars + m; ++j)
      if (s.M[r][j] != 0 && x0[j] != 0) act += s.M[r][j] * x0[j];
    mpq_class resid = s.beta[r] - act;
    // try to cover the residual with the row slack alone
    int slack = num_vars + r;
    bool slack_ok = false;
    if (rows[r].sense < 0 && resid >= 0) slack_ok = true;
    if (rows[r].sense > 0 && resid <= 0) slack_ok = true;  // s = -resid >= 0
    if (rows[r].sense == 0 && resid == 0) slack_ok = true;
    int art = num_vars + m + r;
    if (slack_ok) {
      s.basis[r] = slack;
      s.in_basis[slack] = 1;
      s.M[r][art] = 1;
      s.has_ub[art] = 1;  // pinned [0,0]
    } else {
      s.M[r][art] = resid >= 0 ? mpq_class(1) : mpq_class(-1);
      s.basis[r] = art;
      s.in_basis[art] = 1;
      phase1[art] = 1;
    }
  }
  // normalize basis rows to unit columns
  for (int r = 0; r < m; ++r) {
    int bj = s.basis[r];
    mpq_class piv = s.M[r][bj];
    if (piv != 1) {
      for (int j = 0; j < s.n; ++j) s.M[r][j] /= piv;
      s.beta[r] /= piv;
    }
  }

  ExactLpResult res;
  bool any_art = false;
  for (int j = 0; j < s.n; ++j) any_art = any_art || phase1[j] != 0;
  if (any_art) {
    bool ok = s.optimize(phase1);
    assert(ok);
    (void)ok;
    std::vector<mpq_class> x = s.values();
    mpq_class infeas = 0;
    for (int j = num_vars + m; j < s.n; ++j)
      if (phase1[j] != 0) infeas += x[j];
    if (infeas != 0) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    for (int j = num_vars + m; j < s.n; ++j) {
      s.has_ub[j] = 1;
      s.ub[j] = 0;  // artificials pinned at zero for phase 2
    }
  }

  std::vector<mpq_class> c(s.n, 0);
  for (int j = 0; j < num_vars; ++j) c[j] = cost[j];
  if (!s.optimize(c)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  std::vector<mpq_class> x = s.values();
  res.status = LpStatus::Optimal;
  res.x.assign(x.begin(), x.begin() + num_vars);
  res.objective = 0;
  for (int j = 0; j < num_vars; ++j)
    if (cost[j] != 0 && res.x[j] != 0) res.objective += cost[j] * res.x[j];
  return res;
}

}  // namespace mmv
