#pragma once

#include "stodyn/milp/problem.hpp"

namespace stodyn::milp {

// Best-bound branch and bound over the simplex relaxation, with warm-started
// dual re-solves and a fix-and-resolve rounding heuristic.
Solution branch_and_bound(const Problem& problem, const SolverConfig& config = {});

}  // namespace stodyn::milp
