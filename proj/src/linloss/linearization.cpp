#include "stodyn/linloss/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stodyn::linloss {

LossLinearization LossLinearization::assemble(Partition partition, std::vector<double> means,
                                              double max_error, double mean, double stdev) {
    LossLinearization lin{std::move(partition)};
    lin.conditional_means = std::move(means);
    lin.max_error = max_error;
    lin.source_mean = mean;
    lin.source_stdev = stdev;
    lin.cum_mean_terms_.resize(lin.conditional_means.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < lin.conditional_means.size(); ++i) {
        acc += lin.partition.mass(static_cast<int>(i)) * lin.conditional_means[i];
        lin.cum_mean_terms_[i] = acc;
    }
    return lin;
}

double LossLinearization::lower_bound(double x) const {
    double best = 0.0;  // segment 0
    const auto& cum = partition.cumulative();
    for (std::size_t i = 0; i < cum.size(); ++i)
        best = std::max(best, x * cum[i] - cum_mean_terms_[i]);
    return best;
}

std::pair<double, double> LossLinearization::bound_values(double x) const {
    const double lo = lower_bound(x);
    return {lo, lo + max_error};
}

LossLinearization LossLinearization::scaled(double mu, double sigma) const {
    std::vector<double> means(conditional_means.size());
    for (std::size_t i = 0; i < means.size(); ++i) means[i] = mu + sigma * conditional_means[i];
    return assemble(partition, std::move(means), sigma * max_error,
                    mu + sigma * source_mean, sigma * source_stdev);
}

std::string LossLinearization::dump() const {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < regions(); ++i)
        os << partition.mass(i) << " " << conditional_means[static_cast<std::size_t>(i)] << "\n";
    os << "e_W " << max_error << "\n";
    return os.str();
}

LossLinearization linearize(const probdist::Distribution& dist, const Partition& partition) {
    const int w = partition.regions();
    const auto& cum = partition.cumulative();

    std::vector<double> means(static_cast<std::size_t>(w));
    double prev_cum = 0.0;
    for (int i = 0; i < w; ++i) {
        means[static_cast<std::size_t>(i)] = dist.mass_slice_mean(prev_cum, cum[static_cast<std::size_t>(i)]);
        prev_cum = cum[static_cast<std::size_t>(i)];
    }

    // Errors are attained at the breakpoints, which are the conditional means.
    double cum_term = 0.0;
    double max_err = 0.0;
    for (int i = 0; i < w; ++i) {
        const double e_i = means[static_cast<std::size_t>(i)];
        cum_term += partition.mass(i) * e_i;
        const double jensen = std::max(0.0, e_i * cum[static_cast<std::size_t>(i)] - cum_term);
        // Segments below i cannot exceed segment i at its own breakpoint, so
        // the two-candidate max above is the full lower-bound value there.
        const double gap = dist.complementary_loss(e_i) - jensen;
        max_err = std::max(max_err, gap);
    }

    return LossLinearization::assemble(partition, std::move(means), max_err, dist.mean(),
                                       dist.stdev());
}

std::pair<double, double> bound_values(double x, const LossLinearization& lin) {
    return lin.bound_values(x);
}

}  // namespace stodyn::linloss
