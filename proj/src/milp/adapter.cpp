#include "stodyn/milp/adapter.hpp"

#include <cstdlib>

#include "stodyn/errors.hpp"
#include "stodyn/milp/branch_and_bound.hpp"

namespace stodyn::milp {

namespace {

class InternalSolver final : public SolverAdapter {
public:
    std::string name() const override { return "internal"; }
    Solution solve(const Problem& problem, const SolverConfig& config) override {
        return branch_and_bound(problem, config);
    }
};

}  // namespace

SolverAdapter& solver_adapter(const std::string& name) {
    static InternalSolver internal;
    if (name.empty() || name == "internal") return internal;
    throw EnvironmentError("solver adapter '" + name +
                           "' is not available; set STODYN_SOLVER=internal "
                           "(the built-in branch-and-bound engine) or unset it");
}

SolverAdapter& default_solver_adapter() {
    const char* env = std::getenv("STODYN_SOLVER");
    return solver_adapter(env ? env : "");
}

double env_time_limit(double fallback) {
    const char* env = std::getenv("STODYN_TIME_LIMIT");
    if (!env) return fallback;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || v <= 0.0)
        throw ConfigError("STODYN_TIME_LIMIT must be a positive number of seconds");
    return v;
}

}  // namespace stodyn::milp
