#pragma once

#include <string>
#include <vector>

#include "bustsp/milp.hpp"

// Internal LP engine: bounded-variable revised simplex with a dense
// basis inverse, composite (artificial-free) phase 1, Dantzig pricing and
// Bland's rule engaged after degeneracy is detected. Deterministic: all
// tie-breaks are by lowest index.

namespace bustsp::milp::detail {

struct LpResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> x;  // structural values, by VarId
  double objective = 0.0;
  long iterations = 0;
  std::string note;
};

// Reusable buffers so branch-and-bound node solves do not reallocate.
struct LpWorkspace {
  std::vector<double> binv;  // m*m row-major
  std::vector<double> xb, w, y, cb;
  std::vector<int> basic, where;
  std::vector<double> lo, up, xn;
};

// Solves min c'x s.t. constraints of `p`, with structural bounds
// overridden by (lb, ub). Binary markings in `p` are ignored here.
LpResult solve_lp_core(const MilpProblem& p, const std::vector<double>& lb,
                       const std::vector<double>& ub, LpWorkspace& ws);

}  // namespace bustsp::milp::detail
