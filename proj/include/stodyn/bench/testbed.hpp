#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stodyn/models/instance.hpp"

namespace stodyn::bench {

using models::LotSizingInstance;
using models::Measure;

// Factorial test-bed specification: demand patterns crossed with fixed-cost,
// unit-cost, service-or-penalty and coefficient-of-variation levels.
struct TestBedConfig {
    std::vector<std::string> patterns;  // subset of all_patterns()
    int horizon = 15;
    std::vector<double> fixed_costs{500, 1000, 2000};
    std::vector<double> unit_costs{2, 5, 10};
    std::vector<double> levels{0.8, 0.9, 0.95};  // penalties when measure == penalty
    std::vector<double> cvs{0.10, 0.20, 0.30};
    Measure measure = Measure::alpha;
    std::uint64_t seed = 1;
    // Table-1 rotation of distribution kinds instead of all-normal demand.
    bool heterogeneous = false;
};

// LCY1, LCY2, SIN1, SIN2, STA, RAND, EMP1..EMP4.
const std::vector<std::string>& all_patterns();

// Expected demand per period for one pattern. RAND draws from the seed; the
// EMP vectors are fixed constants tiled to the horizon.
std::vector<double> pattern_means(const std::string& pattern, int horizon, std::uint64_t seed);

// Table-1 kind rotation: normal (sigma = 0.3 mean), poisson, exponential,
// uniform on [0, 2 mean], cycling every four periods.
probdist::DemandProcess heterogeneous_process(int horizon, const std::vector<double>& means);

// Instance with factor coordinates recorded in id/pattern/cv fields.
struct BedInstance {
    LotSizingInstance instance;
    std::string pattern;
    double cv = 0.0;
};

std::vector<BedInstance> generate_testbed(const TestBedConfig& config);

}  // namespace stodyn::bench
