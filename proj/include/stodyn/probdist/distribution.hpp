#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "stodyn/errors.hpp"

namespace stodyn::probdist {

enum class Kind { normal, poisson, exponential, uniform, grid };

const char* kind_name(Kind k);

// A single-period demand law with exact moment, quantile, mass and
// loss-function queries. Value type; the discrete payload is shared and
// immutable, so copies are cheap and instances are safe to read concurrently.
class Distribution {
public:
    static Distribution normal(double mean, double stdev);
    static Distribution poisson(double mean);
    static Distribution exponential(double mean);
    static Distribution uniform(double lower, double upper);
    static Distribution grid(std::vector<double> points, std::vector<double> probabilities);
    // Degenerate single-point law (zero variance).
    static Distribution point_mass(double value);

    Kind kind() const { return kind_; }
    bool is_discrete() const { return kind_ == Kind::poisson || kind_ == Kind::grid; }

    double mean() const { return mean_; }
    double variance() const { return var_; }
    double stdev() const;

    // Distribution parameters (meaning depends on kind):
    // normal -> (mean, stdev); uniform -> (lower, upper);
    // poisson/exponential -> (mean, unused).
    double param_a() const { return a_; }
    double param_b() const { return b_; }

    double cdf(double x) const;

    // Smallest x with CDF(x) >= p; continuous laws return the unique root,
    // discrete laws the smallest support point meeting the condition.
    // Requires 0 < p < 1.
    double quantile(double p) const;

    // Probability mass of a region. For discrete laws the region is
    // half-open [lo, hi): the left endpoint is included.
    double probability(double lo, double hi) const;

    // E[omega | omega in region]; region conventions as in probability().
    // Throws DegenerateRegionError when the region carries no mass.
    double conditional_mean(double lo, double hi) const;

    // E[max(x - omega, 0)], exact (closed form or full summation).
    double complementary_loss(double x) const;
    // E[max(omega - x, 0)] = complementary_loss(x) - (x - mean).
    double loss(double x) const;

    // Mean of the probability-mass slice (c0, c1]; slice boundaries are mass
    // quantiles and atoms straddling a boundary are split fractionally. This
    // is the region machinery behind the piecewise linearisation.
    double mass_slice_mean(double c0, double c1) const;

    // Inverse-CDF draw from a uniform variate in (0,1).
    double sample(double u) const { return quantile(u); }

    // Support points / masses of a discrete law (poisson uses its truncated
    // table). Throws for continuous kinds.
    const std::vector<double>& points() const;
    const std::vector<double>& masses() const;

    std::string describe() const;

private:
    struct Table {
        std::vector<double> points;    // sorted ascending
        std::vector<double> mass;      // positive, sums to 1 (up to truncation)
        std::vector<double> cum_mass;  // inclusive prefix sums of mass
        std::vector<double> cum_pe;    // inclusive prefix sums of points*mass
    };

    Distribution() = default;

    static std::shared_ptr<const Table> make_table(std::vector<double> pts,
                                                   std::vector<double> ms);

    double partial_expectation(double x) const;  // ∫_(-inf,x] t dG; discrete: atoms <= x
    double cum_mass_at(double x) const;          // discrete helper
    double cum_pe_at(double x) const;            // discrete helper

    Kind kind_ = Kind::normal;
    double a_ = 0.0, b_ = 0.0;
    double mean_ = 0.0, var_ = 0.0;
    std::shared_ptr<const Table> table_;  // poisson and grid only
};

}  // namespace stodyn::probdist
