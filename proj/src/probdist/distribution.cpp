#include "stodyn/probdist/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stodyn/math.hpp"

namespace stodyn::probdist {

using math::normal_cdf;
using math::normal_pdf;
using math::normal_quantile;

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::normal: return "normal";
        case Kind::poisson: return "poisson";
        case Kind::exponential: return "exponential";
        case Kind::uniform: return "uniform";
        case Kind::grid: return "grid";
    }
    return "?";
}

namespace {
constexpr double kGridSumTol = 1e-12;
constexpr double kPoissonTailMass = 1e-15;
}  // namespace

std::shared_ptr<const Distribution::Table> Distribution::make_table(std::vector<double> pts,
                                                                    std::vector<double> ms) {
    auto t = std::make_shared<Table>();
    t->points = std::move(pts);
    t->mass = std::move(ms);
    const std::size_t n = t->points.size();
    t->cum_mass.resize(n);
    t->cum_pe.resize(n);
    double cm = 0.0, cp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cm += t->mass[i];
        cp += t->points[i] * t->mass[i];
        t->cum_mass[i] = cm;
        t->cum_pe[i] = cp;
    }
    return t;
}

Distribution Distribution::normal(double mean, double stdev) {
    if (!(stdev > 0.0) || !std::isfinite(mean) || !std::isfinite(stdev))
        throw DomainError("normal: stdev must be > 0");
    Distribution d;
    d.kind_ = Kind::normal;
    d.a_ = mean;
    d.b_ = stdev;
    d.mean_ = mean;
    d.var_ = stdev * stdev;
    return d;
}

Distribution Distribution::poisson(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw DomainError("poisson: mean must be > 0");
    Distribution d;
    d.kind_ = Kind::poisson;
    d.a_ = mean;
    d.mean_ = mean;
    d.var_ = mean;

    // Truncated pmf table covering all but kPoissonTailMass of each tail.
    const double log_lambda = std::log(mean);
    auto log_pmf = [&](double k) { return k * log_lambda - mean - std::lgamma(k + 1.0); };
    const double spread = 10.0 * std::sqrt(mean) + 20.0;
    const long k_min = std::max(0L, static_cast<long>(std::floor(mean - spread)));
    long k = k_min;
    std::vector<double> pts, ms;
    double cum = 0.0;
    // Skip the far left tail.
    while (true) {
        const double p = std::exp(log_pmf(static_cast<double>(k)));
        if (p > kPoissonTailMass || static_cast<double>(k) >= mean) break;
        cum += p;
        ++k;
    }
    for (;; ++k) {
        const double p = std::exp(log_pmf(static_cast<double>(k)));
        pts.push_back(static_cast<double>(k));
        ms.push_back(p);
        cum += p;
        if (static_cast<double>(k) > mean && p < kPoissonTailMass) break;
    }
    d.table_ = make_table(std::move(pts), std::move(ms));
    return d;
}

Distribution Distribution::exponential(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw DomainError("exponential: mean must be > 0");
    Distribution d;
    d.kind_ = Kind::exponential;
    d.a_ = mean;
    d.mean_ = mean;
    d.var_ = mean * mean;
    return d;
}

Distribution Distribution::uniform(double lower, double upper) {
    if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
        throw DomainError("uniform: requires lower < upper");
    Distribution d;
    d.kind_ = Kind::uniform;
    d.a_ = lower;
    d.b_ = upper;
    d.mean_ = 0.5 * (lower + upper);
    d.var_ = (upper - lower) * (upper - lower) / 12.0;
    return d;
}

Distribution Distribution::grid(std::vector<double> points, std::vector<double> probabilities) {
    if (points.empty() || points.size() != probabilities.size())
        throw DomainError("grid: points and probabilities must be nonempty and equal-sized");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });
    std::vector<double> pts, ms;
    pts.reserve(points.size());
    ms.reserve(points.size());
    double sum = 0.0;
    for (std::size_t idx : order) {
        const double x = points[idx], p = probabilities[idx];
        if (!std::isfinite(x)) throw DomainError("grid: non-finite support point");
        if (p < 0.0) throw DomainError("grid: negative probability");
        sum += p;
        if (p == 0.0) continue;
        if (!pts.empty() && pts.back() == x)
            ms.back() += p;  // merge duplicate support points
        else {
            pts.push_back(x);
            ms.push_back(p);
        }
    }
    if (std::fabs(sum - 1.0) > kGridSumTol)
        throw DomainError("grid: probabilities must sum to 1 within 1e-12");
    if (pts.empty()) throw DomainError("grid: no support point has positive mass");

    Distribution d;
    d.kind_ = Kind::grid;
    d.table_ = make_table(std::move(pts), std::move(ms));
    const auto& t = *d.table_;
    const double total = t.cum_mass.back();
    double mean = t.cum_pe.back() / total;
    double var = 0.0;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        const double dx = t.points[i] - mean;
        var += t.mass[i] * dx * dx;
    }
    d.mean_ = mean;
    d.var_ = var / total;
    d.a_ = t.points.front();
    d.b_ = t.points.back();
    return d;
}

Distribution Distribution::point_mass(double value) { return grid({value}, {1.0}); }

double Distribution::stdev() const { return std::sqrt(var_); }

double Distribution::cum_mass_at(double x) const {
    const auto& t = *table_;
    const auto it = std::upper_bound(t.points.begin(), t.points.end(), x);
    if (it == t.points.begin()) return 0.0;
    return t.cum_mass[static_cast<std::size_t>(it - t.points.begin()) - 1];
}

double Distribution::cum_pe_at(double x) const {
    const auto& t = *table_;
    const auto it = std::upper_bound(t.points.begin(), t.points.end(), x);
    if (it == t.points.begin()) return 0.0;
    return t.cum_pe[static_cast<std::size_t>(it - t.points.begin()) - 1];
}

double Distribution::cdf(double x) const {
    switch (kind_) {
        case Kind::normal: return normal_cdf((x - a_) / b_);
        case Kind::exponential: return x <= 0.0 ? 0.0 : -std::expm1(-x / a_);
        case Kind::uniform:
            if (x <= a_) return 0.0;
            if (x >= b_) return 1.0;
            return (x - a_) / (b_ - a_);
        case Kind::poisson:
        case Kind::grid: return std::min(1.0, cum_mass_at(x));
    }
    return 0.0;
}

double Distribution::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0,1)");
    switch (kind_) {
        case Kind::normal: return a_ + b_ * normal_quantile(p);
        case Kind::exponential: return -a_ * std::log1p(-p);
        case Kind::uniform: return a_ + p * (b_ - a_);
        case Kind::poisson:
        case Kind::grid: {
            const auto& t = *table_;
            const auto it = std::lower_bound(t.cum_mass.begin(), t.cum_mass.end(), p);
            if (it == t.cum_mass.end()) return t.points.back();
            return t.points[static_cast<std::size_t>(it - t.cum_mass.begin())];
        }
    }
    return 0.0;
}

double Distribution::partial_expectation(double x) const {
    switch (kind_) {
        case Kind::normal: {
            const double z = (x - a_) / b_;
            return a_ * normal_cdf(z) - b_ * normal_pdf(z);
        }
        case Kind::exponential:
            if (x <= 0.0) return 0.0;
            return a_ - (x + a_) * std::exp(-x / a_);
        case Kind::uniform: {
            const double c = std::clamp(x, a_, b_);
            return (c * c - a_ * a_) / (2.0 * (b_ - a_));
        }
        case Kind::poisson:
        case Kind::grid: return cum_pe_at(x);
    }
    return 0.0;
}

double Distribution::probability(double lo, double hi) const {
    if (!(lo <= hi)) throw DomainError("probability: requires lo <= hi");
    if (is_discrete()) {
        // [lo, hi): include the left endpoint.
        const double below_hi = hi == std::numeric_limits<double>::infinity()
                                    ? table_->cum_mass.back()
                                    : cum_mass_at(std::nexttoward(hi, lo));
        const double below_lo = cum_mass_at(std::nexttoward(lo, lo - 1.0));
        return std::max(0.0, below_hi - below_lo);
    }
    return std::max(0.0, cdf(hi) - cdf(lo));
}

double Distribution::conditional_mean(double lo, double hi) const {
    const double p = probability(lo, hi);
    if (p <= 0.0)
        throw DegenerateRegionError("conditional_mean: region has no probability mass");
    if (is_discrete()) {
        const double pe_hi = hi == std::numeric_limits<double>::infinity()
                                 ? table_->cum_pe.back()
                                 : cum_pe_at(std::nexttoward(hi, lo));
        const double pe_lo = cum_pe_at(std::nexttoward(lo, lo - 1.0));
        return (pe_hi - pe_lo) / p;
    }
    const double hi_pe = hi >= std::numeric_limits<double>::infinity() ? mean_
                                                                       : partial_expectation(hi);
    const double lo_pe = lo <= -std::numeric_limits<double>::infinity()
                             ? 0.0
                             : partial_expectation(lo);
    return (hi_pe - lo_pe) / p;
}

double Distribution::complementary_loss(double x) const {
    switch (kind_) {
        case Kind::normal: {
            const double z = (x - a_) / b_;
            return (x - a_) * normal_cdf(z) + b_ * normal_pdf(z);
        }
        case Kind::exponential:
            if (x <= 0.0) return 0.0;
            return x - a_ * (-std::expm1(-x / a_));
        case Kind::uniform:
            if (x <= a_) return 0.0;
            if (x >= b_) return x - mean_;
            return (x - a_) * (x - a_) / (2.0 * (b_ - a_));
        case Kind::poisson:
        case Kind::grid: return x * cum_mass_at(x) - cum_pe_at(x);
    }
    return 0.0;
}

double Distribution::loss(double x) const { return complementary_loss(x) - (x - mean_); }

double Distribution::mass_slice_mean(double c0, double c1) const {
    if (!(c0 >= 0.0 && c1 <= 1.0 + 1e-12 && c0 < c1))
        throw DomainError("mass_slice_mean: requires 0 <= c0 < c1 <= 1");
    if (is_discrete()) {
        const auto& t = *table_;
        const double total = t.cum_mass.back();
        // pe(c): expected value accumulated over the first c units of mass,
        // splitting the straddling atom fractionally.
        auto pe_at = [&](double c) -> double {
            const double target = c * total;
            const auto it = std::lower_bound(t.cum_mass.begin(), t.cum_mass.end(), target);
            if (it == t.cum_mass.end()) return t.cum_pe.back();
            const std::size_t i = static_cast<std::size_t>(it - t.cum_mass.begin());
            const double below = i == 0 ? 0.0 : t.cum_mass[i - 1];
            const double pe_below = i == 0 ? 0.0 : t.cum_pe[i - 1];
            return pe_below + (target - below) * t.points[i];
        };
        return (pe_at(c1) - pe_at(c0)) / ((c1 - c0) * total);
    }
    const double pe1 = c1 >= 1.0 ? mean_ : partial_expectation(quantile(c1));
    const double pe0 = c0 <= 0.0 ? 0.0 : partial_expectation(quantile(c0));
    return (pe1 - pe0) / (c1 - c0);
}

const std::vector<double>& Distribution::points() const {
    if (!table_) throw DomainError("points: continuous law has no support table");
    return table_->points;
}

const std::vector<double>& Distribution::masses() const {
    if (!table_) throw DomainError("masses: continuous law has no support table");
    return table_->mass;
}

std::string Distribution::describe() const {
    std::ostringstream os;
    os << kind_name(kind_) << "(";
    switch (kind_) {
        case Kind::normal: os << a_ << ", " << b_; break;
        case Kind::poisson:
        case Kind::exponential: os << a_; break;
        case Kind::uniform: os << a_ << ", " << b_; break;
        case Kind::grid: os << table_->points.size() << " points, mean " << mean_; break;
    }
    os << ")";
    return os.str();
}

}  // namespace stodyn::probdist
