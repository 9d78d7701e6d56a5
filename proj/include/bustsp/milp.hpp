#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

// Generic mixed-integer linear program representation plus the internal
// exact solver entry points (LP relaxation via bounded-variable simplex,
// branch-and-bound on binaries).

namespace bustsp::milp {

using VarId = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEpsFeas = 1e-6;  // constraint violation tolerance
inline constexpr double kEpsInt = 1e-6;   // integrality tolerance

enum class VarKind { Continuous, Binary };

struct VariableDef {
  VarId id = -1;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInf;
  std::string name;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
  VarId var = -1;
  double coef = 0.0;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;

  double eval(const std::vector<double>& x) const {
    double v = 0.0;
    for (const Term& t : terms) v += t.coef * x[static_cast<size_t>(t.var)];
    return v;
  }
  // Positive when the constraint is violated, 0 when satisfied.
  double violation(const std::vector<double>& x) const {
    const double v = eval(x);
    switch (sense) {
      case Sense::LessEqual: return v - rhs;
      case Sense::GreaterEqual: return rhs - v;
      case Sense::Equal: return v > rhs ? v - rhs : rhs - v;
    }
    return 0.0;
  }
};

struct LinearExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  void add(VarId v, double c) { terms.push_back({v, c}); }
  double eval(const std::vector<double>& x) const {
    double v = constant;
    for (const Term& t : terms) v += t.coef * x[static_cast<size_t>(t.var)];
    return v;
  }
};

struct MilpProblem {
  std::vector<VariableDef> variables;
  std::vector<LinearConstraint> constraints;
  LinearExpr objective;  // always minimized

  size_t num_vars() const { return variables.size(); }
  size_t num_binaries() const {
    size_t n = 0;
    for (const auto& v : variables)
      if (v.kind == VarKind::Binary) ++n;
    return n;
  }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Validates variable/constraint/objective consistency and returns the
// immutable problem. Throws ValidationError naming the offending entity.
MilpProblem build_problem(std::vector<VariableDef> vars,
                          std::vector<LinearConstraint> constraints,
                          LinearExpr objective);

enum class SolveStatus { Optimal, Infeasible, Unbounded, BudgetExceeded };

const char* to_string(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;  // by VarId; empty when no point available
  double objective = 0.0;
  double best_bound = -kInf;  // valid lower bound on the optimum
  long nodes = 0;
  long lp_iterations = 0;
  double wall_ms = 0.0;
  std::string note;  // diagnostics (numeric issues, budget cause)

  bool has_point() const { return !values.empty(); }
};

struct SolveBudget {
  long max_nodes = 200000;
  double max_wall_ms = kInf;
  std::uint64_t seed = 0;  // reserved; the solver is deterministic
  // Optional MIP start: candidate values for binary variables (by VarId,
  // entries for continuous variables are ignored). Used only to seed the
  // incumbent after an LP completion check.
  std::vector<double> start;
};

// Solves the LP relaxation (binaries relaxed to their [0,1] bounds).
MilpSolution solve_lp_relaxation(const MilpProblem& p);

// Exact branch-and-bound over binary variables. status == Optimal implies
// the objective equals the enumeration optimum on instances small enough
// to enumerate; BudgetExceeded returns the best incumbent and bound.
MilpSolution solve_milp(const MilpProblem& p, const SolveBudget& budget = {});

// Re-substitution check: largest constraint violation plus bound/integrality
// breaches of `x` against `p`. Used by tests and by the solver itself to
// certify returned points.
double max_violation(const MilpProblem& p, const std::vector<double>& x);

// Abstract solver interface so an external solver can be substituted.
// The internal solver is the default and the one acceptance tests run on.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual MilpSolution solve(const MilpProblem& p, const SolveBudget& b) = 0;
  virtual MilpSolution relax(const MilpProblem& p) = 0;
};

class InternalSolver final : public Solver {
 public:
  MilpSolution solve(const MilpProblem& p, const SolveBudget& b) override {
    return solve_milp(p, b);
  }
  MilpSolution relax(const MilpProblem& p) override {
    return solve_lp_relaxation(p);
  }
};

}  // namespace bustsp::milp
