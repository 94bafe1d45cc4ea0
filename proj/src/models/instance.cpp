#include "stodyn/models/instance.hpp"

#include <algorithm>

#include "stodyn/errors.hpp"

namespace stodyn::models {

const char* measure_name(Measure m) {
    switch (m) {
        case Measure::alpha: return "alpha";
        case Measure::penalty: return "penalty";
        case Measure::beta_cyc: return "beta_cyc";
        case Measure::beta: return "beta";
    }
    return "?";
}

const char* shortage_name(Shortage s) {
    return s == Shortage::backorder ? "backorder" : "lost_sales";
}

const char* direction_name(Direction d) { return d == Direction::lower_bound ? "lb" : "ub"; }

void ModelVariant::validate() const {
    if (penalty_basis == PenaltyBasis::per_unit_short &&
        (shortage != Shortage::lost_sales || measure != Measure::penalty))
        throw ConfigError("per_unit_short penalty basis requires lost_sales + penalty measure");
}

std::string ModelVariant::describe() const {
    std::string s = std::string(measure_name(measure)) + "/" + shortage_name(shortage) + "/" +
                    direction_name(direction);
    if (penalty_basis == PenaltyBasis::per_unit_short) s += "/per_unit_short";
    return s;
}

void LotSizingInstance::validate(Shortage shortage) const {
    if (fixed_order_cost < 0.0 || unit_cost < 0.0 || holding_cost < 0.0)
        throw ConfigError("instance: costs a, v, h must be nonnegative");
    if (measure == Measure::penalty) {
        if (penalty_cost < 0.0) throw ConfigError("instance: penalty cost b must be nonnegative");
    } else if (measure == Measure::alpha) {
        if (!(service_level > 0.0 && service_level < 1.0))
            throw ConfigError("instance: alpha service level must lie in (0,1)");
    } else {
        // A zero fill-rate target is allowed; it makes the cap vacuous.
        if (!(service_level >= 0.0 && service_level < 1.0))
            throw ConfigError("instance: fill-rate target must lie in [0,1)");
    }
    if (shortage == Shortage::lost_sales && selling_price < unit_cost)
        throw ConfigError("instance: lost sales requires selling price s >= unit cost v");
    if (horizon() < 1) throw ConfigError("instance: empty demand process");
}

void Policy::validate(int horizon) const {
    if (!std::is_sorted(reviews.begin(), reviews.end()))
        throw ConfigError("policy: review periods must be sorted");
    if (std::adjacent_find(reviews.begin(), reviews.end()) != reviews.end())
        throw ConfigError("policy: duplicate review period");
    for (int t : reviews) {
        if (t < 1 || t > horizon) throw ConfigError("policy: review period out of horizon");
        if (levels.find(t) == levels.end())
            throw ConfigError("policy: missing order-up-to level for a review period");
    }
    if (levels.size() != reviews.size())
        throw ConfigError("policy: levels defined off the review schedule");
}

}  // namespace stodyn::models
