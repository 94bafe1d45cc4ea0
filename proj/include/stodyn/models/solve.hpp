#pragma once

#include <string>

#include "stodyn/milp/adapter.hpp"
#include "stodyn/models/builders.hpp"

namespace stodyn::models {

using SolverSolution = milp::Solution;

struct SolveOptions {
    std::string adapter;  // empty: STODYN_SOLVER or the internal engine
    double time_limit_seconds = 120.0;
    double relative_gap = 1e-7;
};

// Solves through the adapter with the review binaries driving the rounding
// heuristic. STODYN_TIME_LIMIT overrides the configured limit.
SolverSolution solve(const MilpModel& model, const SolveOptions& options = {});

// Review schedule and order-up-to levels S_t = Ihat_t + dbar_t from an
// optimal solution; validates that the P assignment matches the schedule.
Policy extract_policy(const SolverSolution& solution, const MilpModel& model);

}  // namespace stodyn::models
