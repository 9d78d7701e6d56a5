#include "bustsp/milp.hpp"

#include <cmath>
#include <unordered_set>

namespace bustsp::milp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

MilpProblem build_problem(std::vector<VariableDef> vars,
                          std::vector<LinearConstraint> constraints,
                          LinearExpr objective) {
  const int n = static_cast<int>(vars.size());
  for (int i = 0; i < n; ++i) {
    VariableDef& v = vars[static_cast<size_t>(i)];
    if (v.id == -1) v.id = i;
    if (v.id != i)
      throw ValidationError("variable '" + v.name + "' id " +
                            std::to_string(v.id) + " != position " +
                            std::to_string(i));
    if (std::isnan(v.lower) || std::isnan(v.upper))
      throw ValidationError("variable '" + v.name + "' has NaN bound");
    if (v.lower > v.upper)
      throw ValidationError("variable '" + v.name + "' has lower > upper");
    if (v.kind == VarKind::Binary) {
      if (v.lower < -kEpsInt || v.upper > 1.0 + kEpsInt)
        throw ValidationError("binary variable '" + v.name +
                              "' bounds outside [0,1]");
      v.lower = std::max(v.lower, 0.0);
      v.upper = std::min(v.upper, 1.0);
    }
  }
  auto check_term = [&](const Term& t, const std::string& where) {
    if (t.var < 0 || t.var >= n)
      throw ValidationError(where + " references undeclared variable id " +
                            std::to_string(t.var));
    if (!std::isfinite(t.coef))
      throw ValidationError(where + " has non-finite coefficient");
  };
  for (const LinearConstraint& c : constraints) {
    std::unordered_set<VarId> seen;
    for (const Term& t : c.terms) {
      check_term(t, "constraint '" + c.name + "'");
      if (!seen.insert(t.var).second)
        throw ValidationError("constraint '" + c.name +
                              "' repeats variable id " + std::to_string(t.var));
    }
    if (!std::isfinite(c.rhs))
      throw ValidationError("constraint '" + c.name + "' has non-finite rhs");
  }
  for (const Term& t : objective.terms) check_term(t, "objective");

  MilpProblem p;
  p.variables = std::move(vars);
  p.constraints = std::move(constraints);
  p.objective = std::move(objective);
  return p;
}

double max_violation(const MilpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& v : p.variables) {
    const double xv = x[static_cast<size_t>(v.id)];
    worst = std::max(worst, v.lower - xv);
    worst = std::max(worst, xv - v.upper);
    if (v.kind == VarKind::Binary)
      worst = std::max(worst, std::min(std::fabs(xv), std::fabs(xv - 1.0)));
  }
  for (const auto& c : p.constraints)
    worst = std::max(worst, c.violation(x));
  return worst;
}

}  // namespace bustsp::milp
