#include "stodyn/models/solve.hpp"

#include <cmath>

#include "stodyn/errors.hpp"

namespace stodyn::models {

SolverSolution solve(const MilpModel& model, const SolveOptions& options) {
    milp::SolverAdapter& adapter = options.adapter.empty()
                                       ? milp::default_solver_adapter()
                                       : milp::solver_adapter(options.adapter);
    milp::SolverConfig config;
    config.relative_gap = options.relative_gap;
    config.time_limit_seconds = milp::env_time_limit(options.time_limit_seconds);
    config.heuristic_priority = model.delta;
    return adapter.solve(model.problem, config);
}

Policy extract_policy(const SolverSolution& solution, const MilpModel& model) {
    if (solution.status != milp::Status::optimal)
        throw ConfigError("extract_policy: solution is not optimal");
    const auto& x = solution.values;
    Policy policy;
    for (int t = 1; t <= model.horizon; ++t)
        if (x[static_cast<std::size_t>(model.var_delta(t))] > 0.5) {
            policy.reviews.push_back(t);
            policy.levels[t] = x[static_cast<std::size_t>(model.var_ihat(t))] +
                               model.period_mean[static_cast<std::size_t>(t - 1)];
        }

    // P_jt must select exactly the latest review <= t (period 1 when none).
    int last_review = 0;
    for (int t = 1; t <= model.horizon; ++t) {
        if (x[static_cast<std::size_t>(model.var_delta(t))] > 0.5) last_review = t;
        const int expected_j = last_review == 0 ? 1 : last_review;
        for (int j = 1; j <= t; ++j) {
            const double v = x[static_cast<std::size_t>(model.var_p(j, t))];
            const double want = j == expected_j ? 1.0 : 0.0;
            if (std::fabs(v - want) > 1e-4)
                throw ModelIntegrityError(
                    "extract_policy: P assignment inconsistent with the review schedule at "
                    "(j=" + std::to_string(j) + ", t=" + std::to_string(t) + ")");
        }
    }
    return policy;
}

}  // namespace stodyn::models
