#pragma once

#include <string>

#include "bustsp/milp.hpp"

namespace bustsp::milp {

// Renders the problem in CPLEX LP text format (debug / external
// cross-validation only). Deterministic: identical problems yield
// byte-identical text.
std::string export_lp_text(const MilpProblem& p);

}  // namespace bustsp::milp
