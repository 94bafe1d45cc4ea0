#pragma once

#include "stodyn/models/builders.hpp"
#include "stodyn/models/solve.hpp"

namespace stodyn::models {

struct OracleResult {
    milp::Status status = milp::Status::infeasible;
    double objective = 0.0;
    Policy policy;
    unsigned long schedules_tried = 0;
};

// Independent check of the MILP search: iterates all 2^N review schedules,
// fixes the binaries, solves the residual LP per variant and returns the
// best. Refused for N > 10.
OracleResult enumerate_schedules_oracle(const LotSizingInstance& inst,
                                        const ModelVariant& variant,
                                        const LinearizationSet& lins,
                                        const BuildOptions& opts = {});

}  // namespace stodyn::models
