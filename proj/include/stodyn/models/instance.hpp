#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stodyn/probdist/process.hpp"

namespace stodyn::models {

enum class Measure { alpha, penalty, beta_cyc, beta };
enum class Shortage { backorder, lost_sales };
enum class Direction { lower_bound, upper_bound };
enum class PenaltyBasis { per_period, per_unit_short };

const char* measure_name(Measure m);
const char* shortage_name(Shortage s);
const char* direction_name(Direction d);

struct ModelVariant {
    Measure measure = Measure::alpha;
    Shortage shortage = Shortage::backorder;
    Direction direction = Direction::upper_bound;
    PenaltyBasis penalty_basis = PenaltyBasis::per_period;

    void validate() const;
    std::string describe() const;
};

// Horizon, cost, service and demand-process data of one problem instance.
struct LotSizingInstance {
    std::string id;
    double fixed_order_cost = 0.0;   // a, per order
    double unit_cost = 0.0;          // v, per unit
    double holding_cost = 1.0;       // h, per unit per period
    double penalty_cost = 0.0;       // b (penalty measure)
    double selling_price = 0.0;      // s (lost sales only)
    double initial_inventory = 0.0;  // I0
    Measure measure = Measure::alpha;
    double service_level = 0.0;      // alpha / beta / beta_cyc target
    probdist::DemandProcess demand;

    int horizon() const { return demand.horizon(); }
    double margin() const { return selling_price - unit_cost; }

    // Checks cost signs, service-level ranges and s >= v for lost sales.
    void validate(Shortage shortage = Shortage::backorder) const;
};

// Review schedule with order-up-to levels on review periods (1-based).
struct Policy {
    std::vector<int> reviews;            // sorted, distinct
    std::map<int, double> levels;        // S_t for each review period

    bool has_review(int t) const { return levels.count(t) != 0; }
    double level(int t) const { return levels.at(t); }
    void validate(int horizon) const;
};

}  // namespace stodyn::models
