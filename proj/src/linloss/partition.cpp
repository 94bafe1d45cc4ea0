#include "stodyn/linloss/partition.hpp"

#include <cmath>

namespace stodyn::linloss {

Partition::Partition(std::vector<double> masses) : masses_(std::move(masses)) {
    if (masses_.empty()) throw DomainError("Partition: needs at least one region");
    double sum = 0.0;
    cumulative_.reserve(masses_.size());
    for (double p : masses_) {
        if (!(p > 0.0)) throw DomainError("Partition: every mass must be > 0");
        sum += p;
        cumulative_.push_back(sum);
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw DomainError("Partition: masses must sum to 1");
    cumulative_.back() = 1.0;
}

Partition uniform_partition(int regions) {
    if (regions < 1) throw DomainError("uniform_partition: W must be >= 1");
    return Partition(std::vector<double>(static_cast<std::size_t>(regions), 1.0 / regions));
}

}  // namespace stodyn::linloss
