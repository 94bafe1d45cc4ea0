#pragma once

#include <vector>

#include "stodyn/probdist/distribution.hpp"

namespace stodyn::probdist {

// Independent demand per period, 1-based period indices in the public API.
class DemandProcess {
public:
    DemandProcess() = default;
    explicit DemandProcess(std::vector<Distribution> periods);

    int horizon() const { return static_cast<int>(periods_.size()); }
    const Distribution& period(int t) const;  // t in 1..N
    const std::vector<Distribution>& periods() const { return periods_; }

    double mean(int t) const { return period(t).mean(); }
    // Sum of period means over j..t.
    double range_mean(int j, int t) const;

private:
    std::vector<Distribution> periods_;
};

// The law of d_j + ... + d_t under independence.
struct Convolution {
    int first = 0;  // j
    int last = 0;   // t
    Distribution law;
};

inline constexpr int kDefaultGridPoints = 1 << 12;

// Closed form when the whole range shares a closed family (normal, poisson);
// otherwise an iterated numeric convolution on a uniform grid, moment-matched
// to the exact sum mean/variance. Requires 1 <= j <= t <= N.
Convolution convolve(const DemandProcess& process, int j, int t,
                     int grid_points = kDefaultGridPoints);

// All convolutions d_jt of a process, computed once and shared.
class ConvolutionTable {
public:
    ConvolutionTable() = default;
    explicit ConvolutionTable(const DemandProcess& process,
                              int grid_points = kDefaultGridPoints);

    const Distribution& law(int j, int t) const;  // 1 <= j <= t <= N
    double range_mean(int j, int t) const { return law(j, t).mean(); }
    int horizon() const { return horizon_; }

private:
    int horizon_ = 0;
    std::vector<Distribution> laws_;  // triangular, index (j,t)
    std::size_t index(int j, int t) const;
};

}  // namespace stodyn::probdist
