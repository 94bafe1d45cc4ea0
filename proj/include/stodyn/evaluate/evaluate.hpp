#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stodyn/models/instance.hpp"

namespace stodyn::evaluate {

using models::LotSizingInstance;
using models::ModelVariant;
using models::Policy;

// Exact or simulated cost/profit and service metrics of one policy.
struct EvaluationReport {
    bool is_profit = false;
    double objective = 0.0;            // E[TC] or E[TP]
    std::vector<double> on_hand;       // per period E[max(I_t, 0)]
    std::vector<double> backorder;     // per period E[max(-I_t, 0)] (lost sales:
                                       // expected cumulative units short in cycle)
    std::vector<double> alpha;         // per period non-stockout probability
    std::vector<double> cycle_fill;    // per replenishment cycle
    double horizon_fill = 1.0;
    bool service_feasible = true;      // achieved levels meet the instance target
    double standard_error = 0.0;       // simulation only
    long replications = 0;

    std::string to_text() const;       // flat key-value block
    std::string csv_header() const;
    std::string to_csv_row() const;
};

// Expected cost/profit and service levels by loss-function integration on the
// cycle convolutions. The segment before the first review draws down the
// initial inventory with I0 acting as its order-up-to level.
EvaluationReport exact_policy_cost(const Policy& policy, const LotSizingInstance& inst,
                                   const ModelVariant& variant);

struct SimulationOptions {
    bool truncate_demand_at_zero = false;
    int threads = 0;  // 0: hardware default
};

// Monte Carlo replay of the policy dynamics with inverse-CDF sampling;
// deterministic for a given seed independent of the thread count.
EvaluationReport simulate_policy(const Policy& policy, const LotSizingInstance& inst,
                                 const ModelVariant& variant, long replications,
                                 std::uint64_t seed, const SimulationOptions& options = {});

// (ub - lb) / ub in cost sense; 0 when both are 0. Crossed bounds beyond
// 1e-9 raise ConsistencyError.
double optimality_gap(double lower, double upper);

}  // namespace stodyn::evaluate
