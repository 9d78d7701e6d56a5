#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <queue>

#include "bustsp/milp.hpp"
#include "simplex.hpp"

namespace bustsp::milp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void relaxed_bounds(const MilpProblem& p, std::vector<double>& lb,
                    std::vector<double>& ub) {
  const size_t n = p.variables.size();
  lb.resize(n);
  ub.resize(n);
  for (size_t i = 0; i < n; ++i) {
    lb[i] = p.variables[i].lower;
    ub[i] = p.variables[i].upper;
  }
}

// Constraint + bound residual (integrality not checked).
double lp_residual(const MilpProblem& p, const std::vector<double>& x,
                   const std::vector<double>& lb, const std::vector<double>& ub) {
  double worst = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, lb[i] - x[i]);
    worst = std::max(worst, x[i] - ub[i]);
  }
  for (const auto& c : p.constraints) worst = std::max(worst, c.violation(x));
  return worst;
}

struct NodeRec {
  int parent = -1;
  VarId var = -1;
  bool value = false;
};

struct Open {
  double bound;
  long id;
  int rec;
  bool operator<(const Open& o) const {
    if (bound != o.bound) return bound > o.bound;  // min-heap by bound
    return id > o.id;                              // then FIFO
  }
};

}  // namespace

MilpSolution solve_lp_relaxation(const MilpProblem& p) {
  const auto t0 = Clock::now();
  detail::LpWorkspace ws;
  std::vector<double> lb, ub;
  relaxed_bounds(p, lb, ub);
  detail::LpResult r = detail::solve_lp_core(p, lb, ub, ws);

  MilpSolution s;
  s.status = r.status;
  s.lp_iterations = r.iterations;
  s.note = r.note;
  if (r.status == SolveStatus::Optimal) {
    if (lp_residual(p, r.x, lb, ub) > kEpsFeas) {
      s.status = SolveStatus::BudgetExceeded;
      s.note = "lp: verification failed";
    }
    s.values = std::move(r.x);
    s.objective = r.objective;
    s.best_bound = r.objective;
  }
  s.wall_ms = elapsed_ms(t0);
  return s;
}

MilpSolution solve_milp(const MilpProblem& p, const SolveBudget& budget) {
  const auto t0 = Clock::now();
  detail::LpWorkspace ws;
  std::vector<double> lb0, ub0;
  relaxed_bounds(p, lb0, ub0);

  std::vector<VarId> binaries;
  for (const auto& v : p.variables)
    if (v.kind == VarKind::Binary) binaries.push_back(v.id);

  MilpSolution out;
  out.best_bound = -kInf;

  std::vector<double> lb = lb0, ub = ub0;

  auto solve_node = [&](detail::LpResult& r) {
    r = detail::solve_lp_core(p, lb, ub, ws);
    out.lp_iterations += r.iterations;
  };

  // Incumbent bookkeeping.
  bool have_incumbent = false;
  std::vector<double> inc_x;
  double inc_obj = kInf;
  auto try_incumbent = [&](const std::vector<double>& x, double obj) {
    if (!have_incumbent || obj < inc_obj - 1e-12) {
      have_incumbent = true;
      inc_obj = obj;
      inc_x = x;
    }
  };

  // Most-fractional binary (farthest from {0,1}); ties keep the lowest id.
  auto fractional_var = [&](const std::vector<double>& x) -> VarId {
    VarId best = -1;
    double best_dist = kEpsInt;
    for (VarId b : binaries) {
      const double v = x[static_cast<size_t>(b)];
      const double dist = std::min(std::fabs(v), std::fabs(v - 1.0));
      if (dist > best_dist + 1e-15) {
        best_dist = dist;
        best = b;
      }
    }
    return best;
  };

  // MIP start: fix binaries to the suggested values and complete by LP.
  if (!budget.start.empty() &&
      budget.start.size() == p.variables.size() && !binaries.empty()) {
    bool ok = true;
    for (VarId b : binaries) {
      const double v = budget.start[static_cast<size_t>(b)];
      const double r = std::round(v);
      if (std::fabs(v - r) > 0.25 || (r != 0.0 && r != 1.0)) { ok = false; break; }
      if (r < lb0[static_cast<size_t>(b)] - 0.5 || r > ub0[static_cast<size_t>(b)] + 0.5) { ok = false; break; }
      lb[static_cast<size_t>(b)] = ub[static_cast<size_t>(b)] = r;
    }
    if (ok) {
      detail::LpResult r;
      solve_node(r);
      if (r.status == SolveStatus::Optimal &&
          lp_residual(p, r.x, lb, ub) <= kEpsFeas)
        try_incumbent(r.x, r.objective);
    }
    lb = lb0;
    ub = ub0;
  }

  // Root relaxation.
  detail::LpResult root;
  solve_node(root);
  ++out.nodes;
  if (root.status == SolveStatus::Infeasible) {
    out.status = have_incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible;
    if (have_incumbent) {  // should not happen: start feasible but root not
      out.values = inc_x;
      out.objective = inc_obj;
      out.best_bound = inc_obj;
    }
    out.wall_ms = elapsed_ms(t0);
    return out;
  }
  if (root.status == SolveStatus::Unbounded) {
    out.status = SolveStatus::Unbounded;
    out.wall_ms = elapsed_ms(t0);
    return out;
  }
  if (root.status != SolveStatus::Optimal) {
    out.status = SolveStatus::BudgetExceeded;
    out.note = "root: " + root.note;
    out.wall_ms = elapsed_ms(t0);
    return out;
  }

  std::deque<NodeRec> recs;
  std::priority_queue<Open> open;
  long next_id = 0;

  auto expand = [&](const detail::LpResult& r, int rec_idx) -> bool {
    // Returns false when the node closed (integral/pruned), true when split.
    const VarId f = fractional_var(r.x);
    if (f == -1) {
      try_incumbent(r.x, r.objective);
      return false;
    }
    for (int v = 0; v <= 1; ++v) {
      recs.push_back({rec_idx, f, v == 1});
      open.push({r.objective, next_id++, static_cast<int>(recs.size()) - 1});
    }
    return true;
  };

  expand(root, -1);

  std::string stop_note;
  while (!open.empty()) {
    if (out.nodes >= budget.max_nodes) { stop_note = "node limit"; break; }
    if (elapsed_ms(t0) > budget.max_wall_ms) { stop_note = "time limit"; break; }

    const Open top = open.top();
    if (have_incumbent && top.bound >= inc_obj - 1e-9) {
      // Best-bound order: everything remaining is dominated.
      while (!open.empty()) open.pop();
      break;
    }
    open.pop();

    // Assemble bounds along the fix chain.
    lb = lb0;
    ub = ub0;
    for (int i = top.rec; i != -1; i = recs[static_cast<size_t>(i)].parent) {
      const NodeRec& nr = recs[static_cast<size_t>(i)];
      if (nr.var < 0) continue;
      const double v = nr.value ? 1.0 : 0.0;
      lb[static_cast<size_t>(nr.var)] = v;
      ub[static_cast<size_t>(nr.var)] = v;
    }

    detail::LpResult r;
    solve_node(r);
    ++out.nodes;
    if (r.status == SolveStatus::Infeasible) continue;
    if (r.status != SolveStatus::Optimal) {
      stop_note = "node lp: " + r.note;
      break;
    }
    if (have_incumbent && r.objective >= inc_obj - 1e-9) continue;
    expand(r, top.rec);
  }

  double open_bound = kInf;
  if (!open.empty()) open_bound = open.top().bound;
  const bool proven = open.empty() && stop_note.empty();

  if (have_incumbent) {
    out.values = inc_x;
    out.objective = inc_obj;
    out.best_bound = proven ? inc_obj : std::min(open_bound, inc_obj);
    out.status = proven ? SolveStatus::Optimal : SolveStatus::BudgetExceeded;
  } else if (proven) {
    out.status = SolveStatus::Infeasible;
  } else {
    out.status = SolveStatus::BudgetExceeded;
    out.best_bound = open_bound == kInf ? root.objective : open_bound;
  }
  if (!stop_note.empty()) out.note = stop_note;
  out.wall_ms = elapsed_ms(t0);
  return out;
}

}  // namespace bustsp::milp
