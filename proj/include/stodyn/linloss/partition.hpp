#pragma once

#include <vector>

#include "stodyn/errors.hpp"

namespace stodyn::linloss {

// Probability masses p_1..p_W of a support partition into W regions.
// Every mass is strictly positive and they sum to one within 1e-12.
class Partition {
public:
    explicit Partition(std::vector<double> masses);

    int regions() const { return static_cast<int>(masses_.size()); }
    const std::vector<double>& masses() const { return masses_; }
    double mass(int i) const { return masses_[static_cast<std::size_t>(i)]; }

    // Cumulative masses c_1..c_W (c_W == 1 exactly).
    const std::vector<double>& cumulative() const { return cumulative_; }

    bool operator==(const Partition& other) const { return masses_ == other.masses_; }

private:
    std::vector<double> masses_;
    std::vector<double> cumulative_;
};

// p_i = 1/W for all i. Requires W >= 1.
Partition uniform_partition(int regions);

}  // namespace stodyn::linloss
