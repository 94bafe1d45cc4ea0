#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stodyn/linloss/partition.hpp"
#include "stodyn/probdist/distribution.hpp"

namespace stodyn::linloss {

// Piecewise-linear bounding data of the complementary first-order loss
// function of one random variable: region masses, conditional means and the
// maximum approximation error e_W of the Jensen lower bound. The upper bound
// is the lower bound shifted up by e_W.
struct LossLinearization {
    explicit LossLinearization(Partition p) : partition(std::move(p)) {}

    Partition partition;
    std::vector<double> conditional_means;  // strictly increasing for continuous laws
    double max_error = 0.0;                 // e_W >= 0
    double source_mean = 0.0;
    double source_stdev = 0.0;

    int regions() const { return partition.regions(); }

    // max over segments i=0..W of x*c_i - sum_{k<=i} p_k E_k (segment 0 is 0).
    double lower_bound(double x) const;
    // (lower, lower + e_W).
    std::pair<double, double> bound_values(double x) const;

    // Affine image under omega -> mu + sigma*omega (normal scaling).
    LossLinearization scaled(double mu, double sigma) const;

    // sum_{k<=i} p_k E_k for i = 1..W; segment intercepts of the lower bound.
    const std::vector<double>& cumulative_mean_terms() const { return cum_mean_terms_; }

    // One "p_i E_i" line per region plus a trailing e_W line.
    std::string dump() const;

    static LossLinearization assemble(Partition partition, std::vector<double> means,
                                      double max_error, double mean, double stdev);

private:
    std::vector<double> cum_mean_terms_;
};

// Region boundaries at the partition's cumulative mass quantiles, conditional
// means per region, and the maximum Jensen gap over the W breakpoints.
LossLinearization linearize(const probdist::Distribution& dist, const Partition& partition);

// Shorthand used in tests and tools.
std::pair<double, double> bound_values(double x, const LossLinearization& lin);

}  // namespace stodyn::linloss
