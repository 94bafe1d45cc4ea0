#include "stodyn/linloss/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include "stodyn/math.hpp"

namespace stodyn::linloss {

namespace {

constexpr double kMinMass = 1e-9;

std::vector<double> random_masses(int w, std::uint64_t seed) {
    // Uniform on the simplex: normalized exponentials.
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> m(static_cast<std::size_t>(w));
    double sum = 0.0;
    for (double& x : m) {
        x = std::max(expo(rng), 1e-12);
        sum += x;
    }
    for (double& x : m) x /= sum;
    // Guard against pathological draws collapsing a region.
    for (double& x : m)
        if (x < kMinMass) x = kMinMass;
    sum = 0.0;
    for (double x : m) sum += x;
    for (double& x : m) x /= sum;
    return m;
}

template <typename F>
void parallel_for(int n, int threads, F&& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

double minimax_error(const std::vector<probdist::Distribution>& dists,
                     const Partition& partition) {
    double worst = 0.0;
    for (const auto& d : dists) worst = std::max(worst, linearize(d, partition).max_error);
    return worst;
}

PartitionSearchResult search_partition(const std::vector<probdist::Distribution>& dists,
                                       int regions, const SearchConfig& config) {
    if (dists.empty()) throw DomainError("search_partition: needs at least one distribution");
    if (regions < 2) throw DomainError("search_partition: W must be >= 2");
    if (!(config.step_size > 0.0 && config.step_size < 1.0))
        throw DomainError("search_partition: step size must lie in (0,1)");

    const int population = config.population_size > 0 ? config.population_size : 500 * regions;

    // Candidate masses: the uniform partition plus `population` random tuples,
    // each generated from its own derived seed (thread-count independent).
    std::vector<std::vector<double>> candidates;
    candidates.reserve(static_cast<std::size_t>(population) + 1);
    candidates.push_back(uniform_partition(regions).masses());
    for (int k = 0; k < population; ++k)
        candidates.push_back(random_masses(regions, math::derive_seed(config.seed, static_cast<std::uint64_t>(k))));

    std::vector<double> scores(candidates.size());
    parallel_for(static_cast<int>(candidates.size()), config.threads, [&](int i) {
        scores[static_cast<std::size_t>(i)] =
            minimax_error(dists, Partition(candidates[static_cast<std::size_t>(i)]));
    });

    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] < scores[best_idx]) best_idx = i;

    std::vector<double> incumbent = candidates[best_idx];
    double best = scores[best_idx];

    PartitionSearchResult result{Partition(incumbent), best, 0, false};

    const double eps = config.step_size;
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
        bool improved = false;
        for (int i = 0; i + 1 < regions; ++i) {
            // Moves +/-eps on p_i compensated in p_W, clipped to keep both
            // masses positive.
            std::array<double, 2> deltas{-eps, +eps};
            double move_best = best;
            double move_delta = 0.0;
            for (double delta : deltas) {
                double d = delta;
                const double pi = incumbent[static_cast<std::size_t>(i)];
                const double pw = incumbent[static_cast<std::size_t>(regions - 1)];
                if (pi + d < kMinMass) {
                    d = kMinMass - pi;
                    result.step_clipped = true;
                }
                if (pw - d < kMinMass) {
                    d = pw - kMinMass;
                    result.step_clipped = true;
                }
                if (d == 0.0) continue;
                std::vector<double> trial = incumbent;
                trial[static_cast<std::size_t>(i)] += d;
                trial[static_cast<std::size_t>(regions - 1)] -= d;
                const double score = minimax_error(dists, Partition(trial));
                // Ties between the two moves resolve to -eps (tried first).
                if (score < move_best) {
                    move_best = score;
                    move_delta = d;
                }
            }
            if (move_delta != 0.0) {
                incumbent[static_cast<std::size_t>(i)] += move_delta;
                incumbent[static_cast<std::size_t>(regions - 1)] -= move_delta;
                best = move_best;
                improved = true;
            }
        }
        result.sweeps = sweep + 1;
        if (!improved) break;
    }

    result.partition = Partition(incumbent);
    result.minimax_error = best;
    return result;
}

Partition optimize_partition(const std::vector<probdist::Distribution>& dists, int regions,
                             const SearchConfig& config) {
    return search_partition(dists, regions, config).partition;
}

namespace {

// Equal-ripple construction for a single law: masses are chosen so every
// breakpoint error equals a target e, and the target is found by bisection
// on the residual at the last breakpoint. A target above the optimum makes
// greedy regions so fat that an intermediate region pins at the remaining
// mass (or exhausts it); a target below leaves the last breakpoint error
// above target.
struct RippleBuild {
    bool too_large = false;  // pinned or exhausted before the last region
    std::vector<double> masses;
    double last_error = 0.0;
};

constexpr double kMassFloor = 1e-9;

double breakpoint_error(const probdist::Distribution& dist, const LossLinearization& lin,
                        int i) {
    const auto& cums = lin.partition.cumulative();
    const double b = lin.conditional_means[static_cast<std::size_t>(i)];
    const double jensen = std::max(0.0, b * cums[static_cast<std::size_t>(i)] -
                                            lin.cumulative_mean_terms()[static_cast<std::size_t>(i)]);
    return dist.complementary_loss(b) - jensen;
}

RippleBuild build_for_target(const probdist::Distribution& dist, int w, double target) {
    RippleBuild out;
    std::vector<double>& masses = out.masses;
    masses.reserve(static_cast<std::size_t>(w));
    double cum = 0.0;
    for (int i = 0; i + 1 < w; ++i) {
        const double avail = 1.0 - cum;
        if (avail < 3.0 * kMassFloor) {
            out.too_large = true;
            return out;
        }
        double lo = kMassFloor, hi = avail - 2.0 * kMassFloor;
        // Breakpoint-i error grows with the region's mass.
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            std::vector<double> trial = masses;
            trial.push_back(mid);
            trial.push_back(avail - mid);
            LossLinearization lin = linearize(dist, Partition(std::move(trial)));
            if (breakpoint_error(dist, lin, i) < target)
                lo = mid;
            else
                hi = mid;
        }
        if (hi > avail - 2.0 * kMassFloor - 1e-12) {
            out.too_large = true;  // region pinned at the whole remaining mass
            return out;
        }
        masses.push_back(0.5 * (lo + hi));
        cum += masses.back();
    }
    masses.push_back(1.0 - cum);
    LossLinearization lin = linearize(dist, Partition(masses));
    out.last_error = breakpoint_error(dist, lin, w - 1);
    return out;
}

LossLinearization compute_standard_normal(int w) {
    const probdist::Distribution z = probdist::Distribution::normal(0.0, 1.0);
    if (w == 1) return linearize(z, uniform_partition(1));
    double lo = 1e-10, hi = z.complementary_loss(0.0);
    for (int it = 0; it < 60; ++it) {
        const double target = 0.5 * (lo + hi);
        RippleBuild b = build_for_target(z, w, target);
        if (b.too_large || b.last_error <= target)
            hi = target;
        else
            lo = target;
    }
    for (int attempt = 0; attempt < 8; ++attempt) {
        RippleBuild b = build_for_target(z, w, hi);
        if (!b.too_large) return linearize(z, Partition(b.masses));
        hi += std::max(1e-12, 1e-9 * hi);
    }
    return linearize(z, uniform_partition(w));
}

}  // namespace

const LossLinearization& standard_normal_table(int regions) {
    if (regions < 1 || regions > 20)
        throw DomainError("standard_normal_table: W must lie in 1..20");
    static std::array<std::unique_ptr<LossLinearization>, 21> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[static_cast<std::size_t>(regions)];
    if (!slot) slot = std::make_unique<LossLinearization>(compute_standard_normal(regions));
    return *slot;
}

}  // namespace stodyn::linloss
