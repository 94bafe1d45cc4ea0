#pragma once

#include <memory>
#include <string>

#include "stodyn/milp/problem.hpp"

namespace stodyn::milp {

// Adapter contract over a branch-and-bound MILP engine: load the model, set
// gap/time parameters, return status/objective/assignment.
class SolverAdapter {
public:
    virtual ~SolverAdapter() = default;
    virtual std::string name() const = 0;
    virtual Solution solve(const Problem& problem, const SolverConfig& config) = 0;
};

// Resolves an adapter by name; "internal" (or empty) selects the built-in
// engine. Unknown names raise EnvironmentError with the available choices.
SolverAdapter& solver_adapter(const std::string& name);

// Adapter named by the STODYN_SOLVER environment variable (default internal),
// honoring a STODYN_TIME_LIMIT override (seconds) inside config defaults.
SolverAdapter& default_solver_adapter();

// Time limit from STODYN_TIME_LIMIT, or the given fallback.
double env_time_limit(double fallback);

}  // namespace stodyn::milp
