#include "stodyn/models/linearizations.hpp"

#include <cmath>
#include <stdexcept>

#include "stodyn/errors.hpp"
#include "stodyn/math.hpp"

namespace stodyn::models {

LinearizationSet LinearizationSet::build(
    std::shared_ptr<const probdist::ConvolutionTable> table,
    const linloss::Partition& partition) {
    if (!table) throw ConfigError("LinearizationSet::build: null convolution table");
    LinearizationSet set(table->horizon(), partition);
    set.lins_.reserve(static_cast<std::size_t>(set.horizon_) * (set.horizon_ + 1) / 2);
    for (int j = 1; j <= set.horizon_; ++j)
        for (int t = j; t <= set.horizon_; ++t)
            set.lins_.push_back(linloss::linearize(table->law(j, t), partition));
    set.table_ = std::move(table);
    return set;
}

LinearizationSet LinearizationSet::build_normal_scaled(
    const probdist::DemandProcess& process, const linloss::LossLinearization& standard) {
    for (const auto& d : process.periods())
        if (d.kind() != probdist::Kind::normal)
            throw ConfigError("build_normal_scaled: all demand periods must be normal");
    LinearizationSet set(process.horizon(), standard.partition);
    set.lins_.reserve(static_cast<std::size_t>(set.horizon_) * (set.horizon_ + 1) / 2);
    for (int j = 1; j <= set.horizon_; ++j) {
        double mu = 0.0, var = 0.0;
        for (int t = j; t <= set.horizon_; ++t) {
            mu += process.period(t).mean();
            var += process.period(t).variance();
            set.lins_.push_back(standard.scaled(mu, std::sqrt(var)));
        }
    }
    return set;
}

std::size_t LinearizationSet::index(int j, int t) const {
    if (j < 1 || t > horizon_ || j > t)
        throw std::out_of_range("LinearizationSet: range out of bounds");
    const std::size_t row_start =
        static_cast<std::size_t>(j - 1) * (2 * horizon_ - j + 2) / 2;
    return row_start + static_cast<std::size_t>(t - j);
}

const linloss::LossLinearization& LinearizationSet::at(int j, int t) const {
    return lins_[index(j, t)];
}

double LinearizationSet::quantile(int j, int t, double p) const {
    if (table_) return table_->law(j, t).quantile(p);
    const auto& lin = at(j, t);
    return lin.source_mean + lin.source_stdev * math::normal_quantile(p);
}

}  // namespace stodyn::models
