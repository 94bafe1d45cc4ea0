#include "stodyn/bench/testbed.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "stodyn/errors.hpp"
#include "stodyn/math.hpp"

namespace stodyn::bench {

using probdist::DemandProcess;
using probdist::Distribution;

namespace {

// Fixed empirical demand series shipped with the artifact (fifteen period
// means each); regeneration is byte-identical by construction.
const double kEmp[4][15] = {
    {84, 128, 167, 145, 97, 62, 58, 77, 112, 143, 135, 104, 78, 66, 91},
    {146, 110, 92, 135, 172, 150, 99, 73, 95, 124, 88, 61, 107, 139, 118},
    {53, 74, 120, 164, 181, 158, 126, 101, 89, 117, 148, 130, 95, 71, 60},
    {122, 97, 144, 168, 131, 86, 69, 104, 152, 176, 140, 109, 83, 115, 127},
};

double lerp(double a, double b, double f) { return a + (b - a) * f; }

}  // namespace

const std::vector<std::string>& all_patterns() {
    static const std::vector<std::string> p{"LCY1", "LCY2", "SIN1", "SIN2", "STA",
                                            "RAND", "EMP1", "EMP2", "EMP3", "EMP4"};
    return p;
}

std::vector<double> pattern_means(const std::string& pattern, int horizon, std::uint64_t seed) {
    if (horizon < 1) throw ConfigError("pattern_means: horizon must be >= 1");
    std::vector<double> means(static_cast<std::size_t>(horizon));
    if (pattern == "STA") {
        for (double& m : means) m = 100.0;
    } else if (pattern == "LCY1" || pattern == "LCY2") {
        // Asymmetric life-cycle hump: ramp to a peak, then decline.
        const int peak = std::max(2, pattern == "LCY1" ? (horizon + 2) / 3
                                                       : (2 * horizon + 2) / 3);
        for (int t = 1; t <= horizon; ++t) {
            double m;
            if (t <= peak)
                m = lerp(30.0, 180.0, peak == 1 ? 1.0 : double(t - 1) / (peak - 1));
            else
                m = lerp(180.0, 20.0, double(t - peak) / std::max(1, horizon - peak));
            means[static_cast<std::size_t>(t - 1)] = m;
        }
    } else if (pattern == "SIN1" || pattern == "SIN2") {
        const double cycles = pattern == "SIN1" ? 1.0 : 2.0;
        const double amp = pattern == "SIN1" ? 60.0 : 40.0;
        for (int t = 1; t <= horizon; ++t)
            means[static_cast<std::size_t>(t - 1)] =
                100.0 + amp * std::sin(2.0 * math::kPi * cycles * t / horizon);
    } else if (pattern == "RAND") {
        std::mt19937_64 rng(math::derive_seed(seed, 0xa5a5));
        std::uniform_real_distribution<double> u(20.0, 180.0);
        for (double& m : means) m = std::round(u(rng));
    } else if (pattern.rfind("EMP", 0) == 0 && pattern.size() == 4 && pattern[3] >= '1' &&
               pattern[3] <= '4') {
        const double* base = kEmp[pattern[3] - '1'];
        for (int t = 0; t < horizon; ++t) means[static_cast<std::size_t>(t)] = base[t % 15];
    } else {
        throw ConfigError("unknown demand pattern: " + pattern);
    }
    return means;
}

probdist::DemandProcess heterogeneous_process(int horizon, const std::vector<double>& means) {
    if (static_cast<int>(means.size()) != horizon)
        throw ConfigError("heterogeneous_process: means size must equal the horizon");
    std::vector<Distribution> periods;
    periods.reserve(static_cast<std::size_t>(horizon));
    for (int t = 1; t <= horizon; ++t) {
        const double m = means[static_cast<std::size_t>(t - 1)];
        if (!(m > 0.0)) throw DomainError("heterogeneous_process: nonpositive mean");
        switch ((t - 1) % 4) {
            case 0: periods.push_back(Distribution::normal(m, 0.3 * m)); break;
            case 1: periods.push_back(Distribution::poisson(m)); break;
            case 2: periods.push_back(Distribution::exponential(m)); break;
            default: periods.push_back(Distribution::uniform(0.0, 2.0 * m)); break;
        }
    }
    return DemandProcess(std::move(periods));
}

std::vector<BedInstance> generate_testbed(const TestBedConfig& config) {
    if (config.patterns.empty()) throw ConfigError("testbed: empty pattern list");
    if (config.fixed_costs.empty() || config.unit_costs.empty() || config.levels.empty() ||
        (!config.heterogeneous && config.cvs.empty()))
        throw ConfigError("testbed: empty factor list");

    const std::vector<double> cvs = config.heterogeneous ? std::vector<double>{0.3} : config.cvs;
    std::vector<BedInstance> bed;
    for (const std::string& pattern : config.patterns) {
        const auto means = pattern_means(pattern, config.horizon, config.seed);
        for (double a : config.fixed_costs)
            for (double v : config.unit_costs)
                for (double level : config.levels)
                    for (double cv : cvs) {
                        BedInstance cell;
                        cell.pattern = pattern;
                        cell.cv = cv;
                        LotSizingInstance& inst = cell.instance;
                        inst.fixed_order_cost = a;
                        inst.unit_cost = v;
                        inst.holding_cost = 1.0;  // cost numeraire
                        inst.measure = config.measure;
                        if (config.measure == Measure::penalty)
                            inst.penalty_cost = level;
                        else
                            inst.service_level = level;
                        if (config.heterogeneous) {
                            inst.demand = heterogeneous_process(config.horizon, means);
                        } else {
                            std::vector<Distribution> periods;
                            for (double m : means)
                                periods.push_back(Distribution::normal(m, cv * m));
                            inst.demand = DemandProcess(std::move(periods));
                        }
                        std::ostringstream id;
                        id << pattern << "-" << models::measure_name(config.measure) << "-a"
                           << a << "-v" << v << "-L" << level << "-c" << cv;
                        inst.id = id.str();
                        bed.push_back(std::move(cell));
                    }
    }
    return bed;
}

}  // namespace stodyn::bench
