#include "stodyn/models/oracle.hpp"

#include <cmath>

#include "stodyn/errors.hpp"
#include "stodyn/milp/simplex.hpp"

namespace stodyn::models {

OracleResult enumerate_schedules_oracle(const LotSizingInstance& inst,
                                        const ModelVariant& variant,
                                        const LinearizationSet& lins, const BuildOptions& opts) {
    const int n = inst.horizon();
    if (n > 10) throw DomainError("enumerate_schedules_oracle: refused for N > 10");

    MilpModel model = build_model(inst, lins, variant, opts);
    milp::SimplexSolver lp(model.problem);
    const double sign = model.problem.sense == milp::Sense::maximize ? -1.0 : 1.0;

    OracleResult best;
    std::vector<double> best_x;

    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        ++best.schedules_tried;
        // Fix the review schedule and the implied cycle selectors.
        int last_review = 0;
        for (int t = 1; t <= n; ++t) {
            const bool review = (mask >> (t - 1)) & 1UL;
            lp.set_bounds(model.var_delta(t), review ? 1.0 : 0.0, review ? 1.0 : 0.0);
            if (review) last_review = t;
            const int expected_j = last_review == 0 ? 1 : last_review;
            for (int j = 1; j <= t; ++j) {
                const double v = j == expected_j ? 1.0 : 0.0;
                lp.set_bounds(model.var_p(j, t), v, v);
            }
        }

        const milp::LpResult r = lp.resolve();
        if (r.status != milp::LpStatus::optimal) continue;
        const double objective = sign * lp.objective_value() + model.problem.objective_constant;
        const bool better = best.status != milp::Status::optimal ||
                            (model.problem.sense == milp::Sense::maximize
                                 ? objective > best.objective
                                 : objective < best.objective);
        if (better) {
            best.status = milp::Status::optimal;
            best.objective = objective;
            best_x = lp.primal_values();
        }
    }

    if (best.status == milp::Status::optimal) {
        SolverSolution sol;
        sol.status = milp::Status::optimal;
        sol.objective = best.objective;
        sol.values = std::move(best_x);
        best.policy = extract_policy(sol, model);
    }
    return best;
}

}  // namespace stodyn::models
