#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace bustsp::milp::detail {

namespace {

constexpr double kPivTol = 1e-9;   // minimum acceptable pivot magnitude
constexpr double kDualTol = 1e-9;  // reduced-cost optimality tolerance
constexpr double kPrimTol = 1e-9;  // bound feasibility tolerance (internal)
constexpr double kInfeasTol = 2e-7;  // phase-1 acceptance
constexpr int kStallLimit = 60;      // degenerate pivots before Bland

// Nonbasic status markers stored in `where`.
constexpr int kAtLower = -1;
constexpr int kAtUpper = -2;
constexpr int kFree = -3;

struct Col {
  std::vector<int> row;
  std::vector<double> val;
};

struct Core {
  int m = 0;        // rows
  int nstruct = 0;  // structural columns
  int ncols = 0;    // structural + one logical per row
  std::vector<Col> cols;
  std::vector<double> lo, up;    // per column
  std::vector<double> cost;      // per column (phase 2)
  std::vector<double> rhs;       // per row
  LpWorkspace* ws = nullptr;

  std::vector<double>& binv() { return ws->binv; }
  std::vector<int>& basic() { return ws->basic; }
  std::vector<int>& where() { return ws->where; }
  std::vector<double>& xb() { return ws->xb; }

  double nb_value(int j) const {
    const int s = ws->where[static_cast<size_t>(j)];
    if (s == kAtLower) return lo[static_cast<size_t>(j)];
    if (s == kAtUpper) return up[static_cast<size_t>(j)];
    return 0.0;  // free nonbasic
  }

  // w = Binv * A_j
  void ftran(int j, std::vector<double>& w) const {
    std::fill(w.begin(), w.end(), 0.0);
    const Col& c = cols[static_cast<size_t>(j)];
    const double* B = ws->binv.data();
    for (size_t k = 0; k < c.row.size(); ++k) {
      const double a = c.val[k];
      const int r = c.row[k];
      // strided column access; column counts are tiny
      for (int i = 0; i < m; ++i) w[static_cast<size_t>(i)] += a * B[static_cast<size_t>(i) * m + r];
    }
  }

  // y = Binv' * cb, with cb given on basic positions (sparse-friendly).
  void btran(const std::vector<double>& cb, std::vector<double>& y) const {
    std::fill(y.begin(), y.end(), 0.0);
    const double* B = ws->binv.data();
    for (int i = 0; i < m; ++i) {
      const double ci = cb[static_cast<size_t>(i)];
      if (ci == 0.0) continue;
      const double* row = B + static_cast<size_t>(i) * m;
      for (int k = 0; k < m; ++k) y[static_cast<size_t>(k)] += ci * row[k];
    }
  }

  double dot_col(int j, const std::vector<double>& y) const {
    const Col& c = cols[static_cast<size_t>(j)];
    double v = 0.0;
    for (size_t k = 0; k < c.row.size(); ++k)
      v += c.val[k] * y[static_cast<size_t>(c.row[k])];
    return v;
  }

  void pivot_update(int r, const std::vector<double>& w) {
    double* B = ws->binv.data();
    const double alpha = w[static_cast<size_t>(r)];
    double* rowr = B + static_cast<size_t>(r) * m;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = w[static_cast<size_t>(i)] / alpha;
      if (f == 0.0) continue;
      double* rowi = B + static_cast<size_t>(i) * m;
      for (int k = 0; k < m; ++k) rowi[k] -= f * rowr[k];
    }
    const double inv = 1.0 / alpha;
    for (int k = 0; k < m; ++k) rowr[k] *= inv;
  }

  void recompute_basics() {
    // xb = Binv * (rhs - A_N x_N), evaluated as Binv*rhs minus columns.
    std::vector<double>& x = ws->xb;
    std::vector<double> t(static_cast<size_t>(m), 0.0);
    for (int r = 0; r < m; ++r) t[static_cast<size_t>(r)] = rhs[static_cast<size_t>(r)];
    for (int j = 0; j < ncols; ++j) {
      if (ws->where[static_cast<size_t>(j)] >= 0) continue;
      const double v = nb_value(j);
      if (v == 0.0) continue;
      const Col& c = cols[static_cast<size_t>(j)];
      for (size_t k = 0; k < c.row.size(); ++k)
        t[static_cast<size_t>(c.row[k])] -= c.val[k] * v;
    }
    const double* B = ws->binv.data();
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      const double* row = B + static_cast<size_t>(i) * m;
      for (int k = 0; k < m; ++k) s += row[k] * t[static_cast<size_t>(k)];
      x[static_cast<size_t>(i)] = s;
    }
  }
};

enum class StepOutcome { Pivoted, Optimal, Unbounded, Stalled };

// One priced simplex step for the given cost vector. `phase1` changes how
// out-of-bounds basics participate in the ratio test.
StepOutcome step(Core& core, const std::vector<double>& colcost, bool phase1,
                 bool bland, double* progress) {
  const int m = core.m;
  auto& ws = *core.ws;

  // Basic cost vector (phase 1: +/-1 on out-of-bounds basics).
  for (int i = 0; i < m; ++i) {
    const int b = ws.basic[static_cast<size_t>(i)];
    double c = 0.0;
    if (phase1) {
      const double x = ws.xb[static_cast<size_t>(i)];
      if (x < core.lo[static_cast<size_t>(b)] - kPrimTol) c = -1.0;
      else if (x > core.up[static_cast<size_t>(b)] + kPrimTol) c = 1.0;
    } else {
      c = colcost[static_cast<size_t>(b)];
    }
    ws.cb[static_cast<size_t>(i)] = c;
  }
  core.btran(ws.cb, ws.y);

  // Pricing.
  int enter = -1, dir = 0;
  double best = bland ? 0.0 : kDualTol;
  for (int j = 0; j < core.ncols; ++j) {
    const int s = ws.where[static_cast<size_t>(j)];
    if (s >= 0) continue;
    const double cj = phase1 ? 0.0 : colcost[static_cast<size_t>(j)];
    const double dj = cj - core.dot_col(j, ws.y);
    int d = 0;
    if (s == kAtLower || s == kFree) {
      if (dj < -kDualTol) d = +1;
    }
    if (d == 0 && (s == kAtUpper || s == kFree)) {
      if (dj > kDualTol) d = -1;
    }
    if (d == 0) continue;
    if (bland) { enter = j; dir = d; break; }
    const double mag = std::fabs(dj);
    if (mag > best) { best = mag; enter = j; dir = d; }
  }
  if (enter == -1) return StepOutcome::Optimal;

  core.ftran(enter, ws.w);

  // Ratio test. x_B(t) = xb - dir*t*w; slope of basic i is -dir*w[i].
  const double kBig = kInf;
  double tmin = kBig;
  int leave_row = -1;      // -1: none; -2: bound flip
  double leave_target = 0; // bound the leaving basic lands on
  double best_piv = 0.0;

  const double span = core.up[static_cast<size_t>(enter)] - core.lo[static_cast<size_t>(enter)];
  if (std::isfinite(span)) {
    tmin = span;
    leave_row = -2;
  }

  for (int i = 0; i < m; ++i) {
    const double wi = ws.w[static_cast<size_t>(i)];
    if (std::fabs(wi) <= kPivTol) continue;
    const double slope = -static_cast<double>(dir) * wi;
    const int b = ws.basic[static_cast<size_t>(i)];
    const double x = ws.xb[static_cast<size_t>(i)];
    const double l = core.lo[static_cast<size_t>(b)];
    const double u = core.up[static_cast<size_t>(b)];
    double t = kBig, target = 0.0;
    if (x < l - kPrimTol) {
      if (slope > 0.0) { t = (l - x) / slope; target = l; }
    } else if (x > u + kPrimTol) {
      if (slope < 0.0) { t = (u - x) / slope; target = u; }
    } else {
      if (slope < 0.0 && std::isfinite(l)) { t = (x - l) / (-slope); target = l; }
      else if (slope > 0.0 && std::isfinite(u)) { t = (u - x) / slope; target = u; }
    }
    if (t == kBig) continue;
    if (t < 0.0) t = 0.0;
    const bool better =
        t < tmin - 1e-12 ||
        (t <= tmin + 1e-12 &&
         (leave_row < 0 ? false
                        : (bland ? ws.basic[static_cast<size_t>(i)] <
                                       ws.basic[static_cast<size_t>(leave_row)]
                                 : std::fabs(wi) > best_piv)));
    if (better || (t <= tmin + 1e-12 && leave_row == -1)) {
      tmin = t;
      leave_row = i;
      leave_target = target;
      best_piv = std::fabs(wi);
    }
  }

  if (leave_row == -1) {
    return phase1 ? StepOutcome::Stalled : StepOutcome::Unbounded;
  }

  *progress = tmin;

  // Move basics.
  if (tmin != 0.0) {
    for (int i = 0; i < m; ++i)
      ws.xb[static_cast<size_t>(i)] -= static_cast<double>(dir) * tmin * ws.w[static_cast<size_t>(i)];
  }

  if (leave_row == -2) {
    // Bound flip, basis unchanged.
    auto& st = ws.where[static_cast<size_t>(enter)];
    st = (st == kAtLower) ? kAtUpper : kAtLower;
    return StepOutcome::Pivoted;
  }

  const int leave_col = ws.basic[static_cast<size_t>(leave_row)];
  const double enter_val = core.nb_value(enter) + static_cast<double>(dir) * tmin;
  ws.where[static_cast<size_t>(leave_col)] =
      (leave_target == core.lo[static_cast<size_t>(leave_col)]) ? kAtLower : kAtUpper;
  if (!std::isfinite(leave_target)) ws.where[static_cast<size_t>(leave_col)] = kFree;
  ws.basic[static_cast<size_t>(leave_row)] = enter;
  ws.where[static_cast<size_t>(enter)] = leave_row;
  core.pivot_update(leave_row, ws.w);
  ws.xb[static_cast<size_t>(leave_row)] = enter_val;
  return StepOutcome::Pivoted;
}

double total_infeasibility(const Core& core) {
  double s = 0.0;
  for (int i = 0; i < core.m; ++i) {
    const int b = core.ws->basic[static_cast<size_t>(i)];
    const double x = core.ws->xb[static_cast<size_t>(i)];
    if (x < core.lo[static_cast<size_t>(b)]) s += core.lo[static_cast<size_t>(b)] - x;
    else if (x > core.up[static_cast<size_t>(b)]) s += x - core.up[static_cast<size_t>(b)];
  }
  return s;
}

}  // namespace

LpResult solve_lp_core(const MilpProblem& p, const std::vector<double>& lb,
                       const std::vector<double>& ub, LpWorkspace& ws) {
  LpResult res;
  const int n = static_cast<int>(p.variables.size());
  const int m = static_cast<int>(p.constraints.size());

  Core core;
  core.m = m;
  core.nstruct = n;
  core.ncols = n + m;
  core.ws = &ws;
  core.cols.assign(static_cast<size_t>(core.ncols), {});
  core.lo.assign(static_cast<size_t>(core.ncols), 0.0);
  core.up.assign(static_cast<size_t>(core.ncols), 0.0);
  core.cost.assign(static_cast<size_t>(core.ncols), 0.0);
  core.rhs.assign(static_cast<size_t>(m), 0.0);

  for (int j = 0; j < n; ++j) {
    core.lo[static_cast<size_t>(j)] = lb[static_cast<size_t>(j)];
    core.up[static_cast<size_t>(j)] = ub[static_cast<size_t>(j)];
  }
  for (int r = 0; r < m; ++r) {
    const LinearConstraint& c = p.constraints[static_cast<size_t>(r)];
    core.rhs[static_cast<size_t>(r)] = c.rhs;
    for (const Term& t : c.terms) {
      core.cols[static_cast<size_t>(t.var)].row.push_back(r);
      core.cols[static_cast<size_t>(t.var)].val.push_back(t.coef);
    }
    const int sj = n + r;  // logical column: a'x + s = rhs
    core.cols[static_cast<size_t>(sj)].row.push_back(r);
    core.cols[static_cast<size_t>(sj)].val.push_back(1.0);
    switch (c.sense) {
      case Sense::LessEqual:
        core.lo[static_cast<size_t>(sj)] = 0.0;
        core.up[static_cast<size_t>(sj)] = kInf;
        break;
      case Sense::GreaterEqual:
        core.lo[static_cast<size_t>(sj)] = -kInf;
        core.up[static_cast<size_t>(sj)] = 0.0;
        break;
      case Sense::Equal:
        core.lo[static_cast<size_t>(sj)] = 0.0;
        core.up[static_cast<size_t>(sj)] = 0.0;
        break;
    }
  }
  for (const Term& t : p.objective.terms)
    core.cost[static_cast<size_t>(t.var)] += t.coef;

  // Initial basis: logicals; structurals at the finite bound closest to 0.
  ws.binv.assign(static_cast<size_t>(m) * static_cast<size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) ws.binv[static_cast<size_t>(i) * m + i] = 1.0;
  ws.basic.assign(static_cast<size_t>(m), 0);
  ws.where.assign(static_cast<size_t>(core.ncols), kAtLower);
  ws.xb.assign(static_cast<size_t>(m), 0.0);
  ws.w.assign(static_cast<size_t>(m), 0.0);
  ws.y.assign(static_cast<size_t>(m), 0.0);
  ws.cb.assign(static_cast<size_t>(m), 0.0);

  for (int j = 0; j < core.ncols; ++j) {
    const double l = core.lo[static_cast<size_t>(j)], u = core.up[static_cast<size_t>(j)];
    if (std::isfinite(l) && std::isfinite(u))
      ws.where[static_cast<size_t>(j)] = (std::fabs(l) <= std::fabs(u)) ? kAtLower : kAtUpper;
    else if (std::isfinite(l))
      ws.where[static_cast<size_t>(j)] = kAtLower;
    else if (std::isfinite(u))
      ws.where[static_cast<size_t>(j)] = kAtUpper;
    else
      ws.where[static_cast<size_t>(j)] = kFree;
  }
  for (int i = 0; i < m; ++i) {
    ws.basic[static_cast<size_t>(i)] = n + i;
    ws.where[static_cast<size_t>(n + i)] = i;
  }
  core.recompute_basics();

  const long max_iters = 2000 + 60L * (m + n);
  long iters = 0;
  bool bland = false;
  int stall = 0;

  // Phase 1.
  while (total_infeasibility(core) > kInfeasTol) {
    if (iters++ > max_iters) {
      res.status = SolveStatus::BudgetExceeded;
      res.note = "simplex: phase-1 iteration limit";
      res.iterations = iters;
      return res;
    }
    double prog = 0.0;
    const StepOutcome out = step(core, core.cost, true, bland, &prog);
    if (out == StepOutcome::Optimal) break;  // phase-1 optimal
    if (out == StepOutcome::Stalled) {
      res.status = SolveStatus::BudgetExceeded;
      res.note = "simplex: phase-1 stall";
      res.iterations = iters;
      return res;
    }
    if (prog <= 1e-11) {
      if (++stall > kStallLimit) bland = true;
    } else {
      stall = 0;
      bland = false;
    }
  }
  if (total_infeasibility(core) > kInfeasTol) {
    res.status = SolveStatus::Infeasible;
    res.iterations = iters;
    return res;
  }

  // Phase 2.
  stall = 0;
  bland = false;
  for (;;) {
    if (iters++ > max_iters) {
      res.status = SolveStatus::BudgetExceeded;
      res.note = "simplex: phase-2 iteration limit";
      res.iterations = iters;
      return res;
    }
    double prog = 0.0;
    const StepOutcome out = step(core, core.cost, false, bland, &prog);
    if (out == StepOutcome::Optimal) break;
    if (out == StepOutcome::Unbounded) {
      res.status = SolveStatus::Unbounded;
      res.iterations = iters;
      return res;
    }
    if (out == StepOutcome::Stalled) {
      res.status = SolveStatus::BudgetExceeded;
      res.note = "simplex: phase-2 stall";
      res.iterations = iters;
      return res;
    }
    if (prog <= 1e-11) {
      if (++stall > kStallLimit) bland = true;
    } else {
      stall = 0;
      bland = false;
    }
  }

  // Guard against drift of the updated inverse.
  core.recompute_basics();

  res.x.assign(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    const int s = ws.where[static_cast<size_t>(j)];
    res.x[static_cast<size_t>(j)] = (s >= 0) ? ws.xb[static_cast<size_t>(s)] : core.nb_value(j);
  }
  // Clamp basics marginally outside their bounds.
  for (int j = 0; j < n; ++j) {
    double& v = res.x[static_cast<size_t>(j)];
    v = std::min(std::max(v, core.lo[static_cast<size_t>(j)]), core.up[static_cast<size_t>(j)]);
  }
  res.objective = p.objective.constant;
  for (const Term& t : p.objective.terms)
    res.objective += t.coef * res.x[static_cast<size_t>(t.var)];
  res.iterations = iters;
  res.status = SolveStatus::Optimal;
  return res;
}

}  // namespace bustsp::milp::detail
