#pragma once

// Independent test oracles for milp-core. These deliberately avoid the
// branch-and-bound path: binaries are enumerated exhaustively and each
// assignment is completed by an LP solve, so agreement with solve_milp is
// meaningful.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "bustsp/milp.hpp"

namespace bustsp::testing {

struct EnumResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> values;
};

// Exhaustive enumeration over all binary assignments; each assignment is
// completed with an LP over the continuous variables.
inline EnumResult enumerate_binaries(const milp::MilpProblem& p) {
  std::vector<milp::VarId> bins;
  for (const auto& v : p.variables)
    if (v.kind == milp::VarKind::Binary) bins.push_back(v.id);
  EnumResult best;
  const std::uint64_t count = 1ull << bins.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    milp::MilpProblem q = p;
    for (size_t i = 0; i < bins.size(); ++i) {
      auto& var = q.variables[static_cast<size_t>(bins[i])];
      const double v = (mask >> i) & 1 ? 1.0 : 0.0;
      var.kind = milp::VarKind::Continuous;
      var.lower = var.upper = v;
    }
    milp::MilpSolution s = milp::solve_lp_relaxation(q);
    if (s.status != milp::SolveStatus::Optimal) continue;
    if (!best.feasible || s.objective < best.objective - 1e-12) {
      best.feasible = true;
      best.objective = s.objective;
      best.values = s.values;
    }
  }
  return best;
}

// Random MILP generator used by the oracle-equivalence properties. Keeps
// instances bounded (finite boxes) so enumeration terminates cleanly.
inline milp::MilpProblem random_milp(std::mt19937_64& rng, int max_bins = 12,
                                     int max_cont = 30) {
  std::uniform_int_distribution<int> nb(0, max_bins);
  std::uniform_int_distribution<int> nc(1, max_cont);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  const int nbin = nb(rng);
  const int ncont = nc(rng);
  std::vector<milp::VariableDef> vars;
  for (int i = 0; i < nbin; ++i)
    vars.push_back({-1, milp::VarKind::Binary, 0, 1, "b" + std::to_string(i)});
  for (int i = 0; i < ncont; ++i) {
    const double lo = -10.0 * u01(rng);
    const double hi = lo + 1.0 + 10.0 * u01(rng);
    vars.push_back(
        {-1, milp::VarKind::Continuous, lo, hi, "x" + std::to_string(i)});
  }
  const int n = nbin + ncont;

  // Most instances are anchored on a known point (binaries integral,
  // continuous interior) so feasible cases dominate; the rest are fully
  // random and exercise the infeasible path.
  const bool anchored = u01(rng) < 0.8;
  std::vector<double> anchor(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto& v = vars[static_cast<size_t>(i)];
    anchor[static_cast<size_t>(i)] =
        v.kind == milp::VarKind::Binary
            ? (u01(rng) < 0.5 ? 0.0 : 1.0)
            : v.lower + u01(rng) * (v.upper - v.lower);
  }

  std::uniform_int_distribution<int> nrows(1, 2 * n);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> sense(0, 2);
  std::vector<milp::LinearConstraint> cons;
  const int rows = nrows(rng);
  for (int r = 0; r < rows; ++r) {
    milp::LinearConstraint c;
    const int terms = 1 + static_cast<int>(u01(rng) * std::min(n, 6));
    std::vector<bool> used(static_cast<size_t>(n), false);
    for (int t = 0; t < terms; ++t) {
      int v = pick(rng);
      if (used[static_cast<size_t>(v)]) continue;
      used[static_cast<size_t>(v)] = true;
      c.terms.push_back({v, coef(rng)});
    }
    if (c.terms.empty()) c.terms.push_back({pick(rng), 1.0});
    const int s = sense(rng);
    c.sense = s == 0 ? milp::Sense::LessEqual
                     : (s == 1 ? milp::Sense::GreaterEqual : milp::Sense::Equal);
    if (c.sense == milp::Sense::Equal && u01(rng) < 0.6)
      c.sense = milp::Sense::LessEqual;
    if (anchored) {
      double at = 0.0;
      for (const auto& t : c.terms)
        at += t.coef * anchor[static_cast<size_t>(t.var)];
      const double slack = 2.0 * u01(rng);
      c.rhs = c.sense == milp::Sense::LessEqual
                  ? at + slack
                  : (c.sense == milp::Sense::GreaterEqual ? at - slack : at);
    } else {
      c.rhs = coef(rng) + 2.0 * u01(rng);
    }
    c.name = "r" + std::to_string(r);
    cons.push_back(std::move(c));
  }
  milp::LinearExpr obj;
  for (int v = 0; v < n; ++v)
    if (u01(rng) < 0.8) obj.add(v, coef(rng));
  return milp::build_problem(std::move(vars), std::move(cons), std::move(obj));
}

}  // namespace bustsp::testing
