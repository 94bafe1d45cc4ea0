#include "stodyn/evaluate/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "stodyn/errors.hpp"
#include "stodyn/math.hpp"
#include "stodyn/probdist/process.hpp"

namespace stodyn::evaluate {

using models::Measure;
using models::PenaltyBasis;
using models::Shortage;
using probdist::Convolution;
using probdist::Distribution;

namespace {

// Replenishment cycles of a policy: [start, end] with the order-up-to level;
// the opening segment before any review runs on I0.
struct Cycle {
    int start, end;
    double level;
    bool from_initial;
};

std::vector<Cycle> cycles_of(const Policy& policy, const LotSizingInstance& inst) {
    std::vector<Cycle> cycles;
    const int n = inst.horizon();
    int next = 0;  // index into reviews
    if (policy.reviews.empty() || policy.reviews.front() > 1)
        cycles.push_back({1, policy.reviews.empty() ? n : policy.reviews.front() - 1,
                          inst.initial_inventory, true});
    while (next < static_cast<int>(policy.reviews.size())) {
        const int r = policy.reviews[static_cast<std::size_t>(next)];
        const int e = next + 1 < static_cast<int>(policy.reviews.size())
                          ? policy.reviews[static_cast<std::size_t>(next) + 1] - 1
                          : n;
        cycles.push_back({r, e, policy.level(r), false});
        ++next;
    }
    return cycles;
}

}  // namespace

EvaluationReport exact_policy_cost(const Policy& policy, const LotSizingInstance& inst,
                                   const ModelVariant& variant) {
    variant.validate();
    inst.validate(variant.shortage);
    policy.validate(inst.horizon());
    for (const auto& [t, s] : policy.levels)
        if (inst.initial_inventory >= 0.0 && s < 0.0)
            throw ConfigError("exact_policy_cost: negative order-up-to level");

    const int n = inst.horizon();
    const bool lost = variant.shortage == Shortage::lost_sales;
    const auto cycles = cycles_of(policy, inst);

    EvaluationReport rep;
    rep.is_profit = lost;
    rep.on_hand.assign(static_cast<std::size_t>(n), 0.0);
    rep.backorder.assign(static_cast<std::size_t>(n), 0.0);
    rep.alpha.assign(static_cast<std::size_t>(n), 1.0);

    double holding = 0.0, penalty_units_per_period = 0.0;
    double total_short = 0.0;          // cycle-end shortfalls over the horizon
    double total_mean = inst.demand.range_mean(1, n);
    double end_on_hand = 0.0;          // E[max(I_N,0)]
    double end_net = 0.0;              // E[I_N] (backorder sense)
    std::vector<double> cycle_short;   // per-unit-short basis term

    for (const auto& cyc : cycles) {
        const double s = cyc.level;
        for (int t = cyc.start; t <= cyc.end; ++t) {
            const Convolution conv = probdist::convolve(inst.demand, cyc.start, t);
            const double on_hand = conv.law.complementary_loss(s);
            const double short_cum = conv.law.loss(s);
            rep.on_hand[static_cast<std::size_t>(t - 1)] = on_hand;
            rep.backorder[static_cast<std::size_t>(t - 1)] = short_cum;
            rep.alpha[static_cast<std::size_t>(t - 1)] = conv.law.cdf(s);
            holding += on_hand;
            penalty_units_per_period += short_cum;
            if (t == cyc.end) {
                const double demand_mean = inst.demand.range_mean(cyc.start, t);
                rep.cycle_fill.push_back(demand_mean > 0.0 ? 1.0 - short_cum / demand_mean
                                                           : 1.0);
                total_short += short_cum;
                cycle_short.push_back(short_cum);
                if (t == n) {
                    end_on_hand = on_hand;
                    end_net = s - demand_mean;
                }
            }
        }
    }
    rep.horizon_fill = total_mean > 0.0 ? 1.0 - total_short / total_mean : 1.0;

    const double a = inst.fixed_order_cost, v = inst.unit_cost, h = inst.holding_cost;
    const int orders = static_cast<int>(policy.reviews.size());

    if (!lost) {
        // E[sum Q] = sum dbar - I0 + E[I_N].
        double cost = a * orders + h * holding + v * (total_mean - inst.initial_inventory + end_net);
        if (variant.measure == Measure::penalty) cost += inst.penalty_cost * penalty_units_per_period;
        rep.objective = cost;
    } else {
        // Expected order quantities by level reset on the previous cycle's
        // expected closing on-hand.
        double order_units = 0.0;
        for (std::size_t c = 0; c < cycles.size(); ++c) {
            if (cycles[c].from_initial) continue;
            double prev_on_hand;
            if (c == 0)
                prev_on_hand = std::max(inst.initial_inventory, 0.0);
            else {
                const auto& prev = cycles[c - 1];
                const Convolution conv = probdist::convolve(inst.demand, prev.start, prev.end);
                prev_on_hand = conv.law.complementary_loss(prev.level);
            }
            order_units += cycles[c].level - prev_on_hand;
        }
        double profit = inst.selling_price * inst.initial_inventory +
                        inst.margin() * order_units - a * orders - h * holding -
                        inst.selling_price * end_on_hand;
        if (variant.measure == Measure::penalty) {
            if (variant.penalty_basis == PenaltyBasis::per_period)
                profit -= inst.penalty_cost * penalty_units_per_period;
            else
                profit -= inst.penalty_cost * total_short;
        }
        rep.objective = profit;
    }

    switch (variant.measure) {
        case Measure::alpha:
            for (double av : rep.alpha)
                if (av < inst.service_level - 1e-9) rep.service_feasible = false;
            break;
        case Measure::beta_cyc:
            for (double f : rep.cycle_fill)
                if (f < inst.service_level - 1e-9) rep.service_feasible = false;
            break;
        case Measure::beta:
            if (rep.horizon_fill < inst.service_level - 1e-9) rep.service_feasible = false;
            break;
        case Measure::penalty: break;
    }
    return rep;
}

namespace {

struct Tally {
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> on_hand, backorder, alpha_count;
    double short_units = 0.0, demand_units = 0.0;
    std::vector<double> cycle_short, cycle_demand;
    long reps = 0;

    explicit Tally(int n, int cycles)
        : on_hand(static_cast<std::size_t>(n), 0.0),
          backorder(static_cast<std::size_t>(n), 0.0),
          alpha_count(static_cast<std::size_t>(n), 0.0),
          cycle_short(static_cast<std::size_t>(cycles), 0.0),
          cycle_demand(static_cast<std::size_t>(cycles), 0.0) {}

    void merge(const Tally& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        for (std::size_t i = 0; i < on_hand.size(); ++i) {
            on_hand[i] += o.on_hand[i];
            backorder[i] += o.backorder[i];
            alpha_count[i] += o.alpha_count[i];
        }
        for (std::size_t i = 0; i < cycle_short.size(); ++i) {
            cycle_short[i] += o.cycle_short[i];
            cycle_demand[i] += o.cycle_demand[i];
        }
        short_units += o.short_units;
        demand_units += o.demand_units;
        reps += o.reps;
    }
};

}  // namespace

EvaluationReport simulate_policy(const Policy& policy, const LotSizingInstance& inst,
                                 const ModelVariant& variant, long replications,
                                 std::uint64_t seed, const SimulationOptions& options) {
    variant.validate();
    inst.validate(variant.shortage);
    policy.validate(inst.horizon());
    if (replications < 2) throw DomainError("simulate_policy: needs at least 2 replications");

    const int n = inst.horizon();
    const bool lost = variant.shortage == Shortage::lost_sales;
    const auto cycles = cycles_of(policy, inst);
    const int num_cycles = static_cast<int>(cycles.size());

    // Which cycle each period belongs to, and the cycle-start per period.
    std::vector<int> cycle_of(static_cast<std::size_t>(n));
    for (int c = 0; c < num_cycles; ++c)
        for (int t = cycles[static_cast<std::size_t>(c)].start;
             t <= cycles[static_cast<std::size_t>(c)].end; ++t)
            cycle_of[static_cast<std::size_t>(t - 1)] = c;

    auto run_replication = [&](std::uint64_t rep_seed, Tally& tally) {
        std::mt19937_64 rng(rep_seed);
        std::uniform_real_distribution<double> unif(std::nextafter(0.0, 1.0),
                                                    std::nextafter(1.0, 0.0));
        double objective = 0.0;
        if (!lost) {
            double inv = inst.initial_inventory;
            for (int t = 1; t <= n; ++t) {
                const auto tu = static_cast<std::size_t>(t - 1);
                if (policy.has_review(t)) {
                    const double q = policy.level(t) - inv;
                    objective += inst.fixed_order_cost + inst.unit_cost * q;
                    inv = policy.level(t);
                }
                double d = inst.demand.period(t).sample(unif(rng));
                if (options.truncate_demand_at_zero) d = std::max(d, 0.0);
                inv -= d;
                tally.demand_units += d;
                objective += inst.holding_cost * std::max(inv, 0.0);
                if (variant.measure == Measure::penalty)
                    objective += inst.penalty_cost * std::max(-inv, 0.0);
                tally.on_hand[tu] += std::max(inv, 0.0);
                tally.backorder[tu] += std::max(-inv, 0.0);
                if (inv >= 0.0) tally.alpha_count[tu] += 1.0;
                const int c = cycle_of[tu];
                if (t == cycles[static_cast<std::size_t>(c)].end) {
                    tally.cycle_short[static_cast<std::size_t>(c)] += std::max(-inv, 0.0);
                    tally.short_units += std::max(-inv, 0.0);
                }
            }
        } else {
            double on_hand = std::max(inst.initial_inventory, 0.0);
            double cycle_lost = 0.0;
            objective += inst.selling_price * inst.initial_inventory;
            for (int t = 1; t <= n; ++t) {
                const auto tu = static_cast<std::size_t>(t - 1);
                if (policy.has_review(t)) {
                    const double q = std::max(policy.level(t) - on_hand, 0.0);
                    objective += inst.margin() * q - inst.fixed_order_cost;
                    on_hand += q;
                    cycle_lost = 0.0;
                }
                double d = inst.demand.period(t).sample(unif(rng));
                if (options.truncate_demand_at_zero) d = std::max(d, 0.0);
                tally.demand_units += d;
                const double sold = std::min(on_hand, d);
                on_hand -= sold;
                cycle_lost += d - sold;
                objective -= inst.holding_cost * on_hand;
                if (variant.measure == Measure::penalty &&
                    variant.penalty_basis == PenaltyBasis::per_period)
                    objective -= inst.penalty_cost * cycle_lost;
                tally.on_hand[tu] += on_hand;
                tally.backorder[tu] += cycle_lost;
                if (cycle_lost <= 0.0) tally.alpha_count[tu] += 1.0;
                const int c = cycle_of[tu];
                if (t == cycles[static_cast<std::size_t>(c)].end) {
                    tally.cycle_short[static_cast<std::size_t>(c)] += cycle_lost;
                    tally.short_units += cycle_lost;
                    if (variant.measure == Measure::penalty &&
                        variant.penalty_basis == PenaltyBasis::per_unit_short)
                        objective -= inst.penalty_cost * cycle_lost;
                }
            }
            objective -= inst.selling_price * on_hand;  // unsold end stock
        }
        tally.sum += objective;
        tally.sumsq += objective * objective;
        tally.reps += 1;
    };

    // Per-cycle demand means are deterministic sums; tally them analytically.
    // (The per-replication demand draws feed only the horizon denominator.)

    constexpr long kChunk = 4096;
    const long num_chunks = (replications + kChunk - 1) / kChunk;
    std::vector<Tally> chunk_tallies(static_cast<std::size_t>(num_chunks), Tally(n, num_cycles));

    int threads = options.threads > 0 ? options.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = static_cast<int>(std::max(1L, std::min<long>(threads, num_chunks)));
    std::atomic<long> next_chunk{0};
    auto worker = [&] {
        for (long c = next_chunk.fetch_add(1); c < num_chunks; c = next_chunk.fetch_add(1)) {
            Tally& tally = chunk_tallies[static_cast<std::size_t>(c)];
            const long lo = c * kChunk;
            const long hi = std::min(replications, lo + kChunk);
            for (long r = lo; r < hi; ++r)
                run_replication(math::derive_seed(seed, static_cast<std::uint64_t>(r)), tally);
        }
    };
    if (threads == 1)
        worker();
    else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Tally total(n, num_cycles);
    for (const auto& t : chunk_tallies) total.merge(t);

    EvaluationReport rep;
    rep.is_profit = lost;
    rep.replications = total.reps;
    const double mean = total.sum / total.reps;
    const double var = std::max(0.0, (total.sumsq - total.reps * mean * mean) / (total.reps - 1));
    rep.objective = mean;
    rep.standard_error = std::sqrt(var / total.reps);
    rep.on_hand.resize(static_cast<std::size_t>(n));
    rep.backorder.resize(static_cast<std::size_t>(n));
    rep.alpha.resize(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        rep.on_hand[static_cast<std::size_t>(t)] = total.on_hand[static_cast<std::size_t>(t)] / total.reps;
        rep.backorder[static_cast<std::size_t>(t)] =
            total.backorder[static_cast<std::size_t>(t)] / total.reps;
        rep.alpha[static_cast<std::size_t>(t)] =
            total.alpha_count[static_cast<std::size_t>(t)] / total.reps;
    }
    for (int c = 0; c < num_cycles; ++c) {
        const auto& cyc = cycles[static_cast<std::size_t>(c)];
        const double dm = inst.demand.range_mean(cyc.start, cyc.end);
        rep.cycle_fill.push_back(
            dm > 0.0 ? 1.0 - total.cycle_short[static_cast<std::size_t>(c)] / total.reps / dm
                     : 1.0);
    }
    const double horizon_mean = inst.demand.range_mean(1, n);
    rep.horizon_fill =
        horizon_mean > 0.0 ? 1.0 - total.short_units / total.reps / horizon_mean : 1.0;
    return rep;
}

double optimality_gap(double lower, double upper) {
    if (lower > upper + 1e-9)
        throw ConsistencyError("optimality_gap: crossed bounds (lb > ub)");
    if (lower == 0.0 && upper == 0.0) return 0.0;
    const double gap = (upper - lower) / std::fabs(upper);
    return std::max(gap, 0.0);
}

std::string EvaluationReport::to_text() const {
    std::ostringstream os;
    os.precision(10);
    os << (is_profit ? "expected_profit" : "expected_cost") << " " << objective << "\n";
    if (replications > 0) {
        os << "standard_error " << standard_error << "\n";
        os << "replications " << replications << "\n";
    }
    for (std::size_t t = 0; t < on_hand.size(); ++t)
        os << "on_hand_" << t + 1 << " " << on_hand[t] << "\n";
    for (std::size_t t = 0; t < backorder.size(); ++t)
        os << "backorder_" << t + 1 << " " << backorder[t] << "\n";
    for (std::size_t t = 0; t < alpha.size(); ++t)
        os << "alpha_" << t + 1 << " " << alpha[t] << "\n";
    for (std::size_t c = 0; c < cycle_fill.size(); ++c)
        os << "cycle_fill_" << c + 1 << " " << cycle_fill[c] << "\n";
    os << "horizon_fill " << horizon_fill << "\n";
    os << "service_feasible " << (service_feasible ? 1 : 0) << "\n";
    return os.str();
}

std::string EvaluationReport::csv_header() const {
    return "objective,standard_error,replications,horizon_fill,min_alpha,min_cycle_fill,"
           "service_feasible";
}

std::string EvaluationReport::to_csv_row() const {
    std::ostringstream os;
    os.precision(10);
    double min_alpha = 1.0, min_fill = 1.0;
    for (double a : alpha) min_alpha = std::min(min_alpha, a);
    for (double f : cycle_fill) min_fill = std::min(min_fill, f);
    os << objective << "," << standard_error << "," << replications << "," << horizon_fill
       << "," << min_alpha << "," << min_fill << "," << (service_feasible ? 1 : 0);
    return os.str();
}

}  // namespace stodyn::evaluate
