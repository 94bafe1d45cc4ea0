#pragma once

#include <memory>
#include <vector>

#include "stodyn/linloss/linearization.hpp"
#include "stodyn/probdist/process.hpp"

namespace stodyn::models {

// One LossLinearization per convolution d_jt, all sharing one partition.
// Built once per (instance, partition); both bound directions reuse it.
// Also answers quantile queries on the convolutions (service constraints).
class LinearizationSet {
public:
    // Generic path: linearize every convolution law directly.
    static LinearizationSet build(std::shared_ptr<const probdist::ConvolutionTable> table,
                                  const linloss::Partition& partition);
    // Normal fast path: scale a standard-normal linearization by the
    // convolution moments. Requires an all-normal process.
    static LinearizationSet build_normal_scaled(const probdist::DemandProcess& process,
                                                const linloss::LossLinearization& standard);

    int horizon() const { return horizon_; }
    int regions() const { return partition_.regions(); }
    const linloss::Partition& partition() const { return partition_; }
    const linloss::LossLinearization& at(int j, int t) const;  // 1 <= j <= t <= N
    double range_mean(int j, int t) const { return at(j, t).source_mean; }
    // p-quantile of d_jt.
    double quantile(int j, int t, double p) const;

private:
    LinearizationSet(int horizon, linloss::Partition partition)
        : horizon_(horizon), partition_(std::move(partition)) {}
    std::size_t index(int j, int t) const;

    int horizon_;
    linloss::Partition partition_;
    std::vector<linloss::LossLinearization> lins_;
    std::shared_ptr<const probdist::ConvolutionTable> table_;  // generic path only
};

}  // namespace stodyn::models
