#pragma once

#include <cstdint>
#include <vector>

#include "stodyn/linloss/linearization.hpp"
#include "stodyn/probdist/distribution.hpp"

namespace stodyn::linloss {

// Simple-random-sampling + coordinate-descent controls.
struct SearchConfig {
    // 0 means the default 500*W.
    int population_size = 0;
    double step_size = 0.002;
    std::uint64_t seed = 1;
    int max_sweeps = 1000;
    int threads = 0;  // 0: hardware default
};

struct PartitionSearchResult {
    Partition partition;
    double minimax_error = 0.0;
    int sweeps = 0;
    bool step_clipped = false;  // a +/-eps move was shortened to keep masses positive
};

// Best partition found for the whole set of random variables under the
// minimax breakpoint-error criterion: random population plus the uniform
// partition, then +/-eps coordinate moves on p_1..p_{W-1} with p_W as slack.
// Deterministic for a given seed, independent of the thread count.
PartitionSearchResult search_partition(const std::vector<probdist::Distribution>& dists, int regions,
                                       const SearchConfig& config);

Partition optimize_partition(const std::vector<probdist::Distribution>& dists, int regions,
                             const SearchConfig& config);

// Largest breakpoint error over the set under a given partition.
double minimax_error(const std::vector<probdist::Distribution>& dists, const Partition& partition);

// Minimax-optimal linearization of the standard normal with W regions,
// computed once by equalising the breakpoint errors and cached. 1 <= W <= 20.
const LossLinearization& standard_normal_table(int regions);

}  // namespace stodyn::linloss
