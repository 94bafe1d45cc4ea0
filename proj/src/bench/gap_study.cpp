#include "stodyn/bench/gap_study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "stodyn/errors.hpp"
#include "stodyn/evaluate/evaluate.hpp"
#include "stodyn/math.hpp"
#include "stodyn/models/builders.hpp"

namespace stodyn::bench {

using models::Direction;
using models::LinearizationSet;
using models::Measure;
using models::MilpModel;
using models::ModelVariant;
using models::Shortage;
using probdist::ConvolutionTable;

const char* strategy_name(PartitionStrategy s) {
    switch (s) {
        case PartitionStrategy::uniform: return "uniform";
        case PartitionStrategy::normal_table: return "normal_table";
        case PartitionStrategy::search: return "search";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool all_normal(const probdist::DemandProcess& process) {
    for (const auto& d : process.periods())
        if (d.kind() != probdist::Kind::normal) return false;
    return true;
}

struct Cell {
    int instance_index;
    ModelVariant variant;
    int segments;
    PartitionStrategy strategy;
};

}  // namespace

GapStudyReport run_gap_study(const std::vector<BedInstance>& instances,
                             const std::vector<ModelVariant>& variants,
                             const GapStudyConfig& config) {
    if (instances.empty() || variants.empty() || config.segment_counts.empty() ||
        config.strategies.empty())
        throw ConfigError("run_gap_study: empty inputs");

    // Convolution tables are shared across every cell of an instance; built
    // up front so the parallel phase is read-only.
    std::vector<std::shared_ptr<const ConvolutionTable>> tables(instances.size());
    bool need_tables = false;
    for (PartitionStrategy s : config.strategies)
        if (s != PartitionStrategy::normal_table) need_tables = true;
    for (const auto& bed : instances)
        if (!all_normal(bed.instance.demand)) need_tables = true;
    if (need_tables)
        for (std::size_t i = 0; i < instances.size(); ++i)
            tables[i] = std::make_shared<ConvolutionTable>(instances[i].instance.demand);

    // Search-strategy partitions per (instance, W), derived deterministically.
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (const ModelVariant& variant : variants) {
            if (variant.measure != instances[i].instance.measure) continue;
            for (int w : config.segment_counts)
                for (PartitionStrategy s : config.strategies)
                    cells.push_back({static_cast<int>(i), variant, w, s});
        }

    std::vector<GapStudyRow> rows(cells.size());
    std::atomic<std::size_t> next{0};

    auto run_cell = [&](std::size_t c) {
        const Cell& cell = cells[c];
        const BedInstance& bed = instances[static_cast<std::size_t>(cell.instance_index)];
        GapStudyRow row;
        row.instance_id = bed.instance.id;
        row.pattern = bed.pattern;
        row.fixed_cost = bed.instance.fixed_order_cost;
        row.unit_cost = bed.instance.unit_cost;
        row.level = bed.instance.measure == Measure::penalty ? bed.instance.penalty_cost
                                                             : bed.instance.service_level;
        row.cv = bed.cv;
        row.measure = cell.variant.measure;
        row.shortage = cell.variant.shortage;
        row.segments = cell.segments;
        row.strategy = cell.strategy;

        const auto build_start = Clock::now();
        std::unique_ptr<LinearizationSet> lins;
        switch (cell.strategy) {
            case PartitionStrategy::normal_table:
                if (!all_normal(bed.instance.demand))
                    throw ConfigError("normal_table strategy requires all-normal demand: " +
                                      bed.instance.id);
                lins = std::make_unique<LinearizationSet>(LinearizationSet::build_normal_scaled(
                    bed.instance.demand, linloss::standard_normal_table(cell.segments)));
                break;
            case PartitionStrategy::uniform:
                lins = std::make_unique<LinearizationSet>(LinearizationSet::build(
                    tables[static_cast<std::size_t>(cell.instance_index)],
                    linloss::uniform_partition(cell.segments)));
                break;
            case PartitionStrategy::search: {
                const auto& table = tables[static_cast<std::size_t>(cell.instance_index)];
                std::vector<probdist::Distribution> laws;
                const int n = table->horizon();
                for (int j = 1; j <= n; ++j)
                    for (int t = j; t <= n; ++t) laws.push_back(table->law(j, t));
                linloss::SearchConfig search = config.search;
                search.seed = math::derive_seed(config.search.seed,
                                                static_cast<std::uint64_t>(cell.instance_index));
                search.threads = 1;  // cells already run in parallel
                auto part = linloss::optimize_partition(laws, cell.segments, search);
                lins = std::make_unique<LinearizationSet>(LinearizationSet::build(table, part));
                break;
            }
        }

        ModelVariant lb_variant = cell.variant;
        lb_variant.direction = Direction::lower_bound;
        ModelVariant ub_variant = cell.variant;
        ub_variant.direction = Direction::upper_bound;
        MilpModel lb_model = models::build_model(bed.instance, *lins, lb_variant, config.build);
        MilpModel ub_model = models::build_model(bed.instance, *lins, ub_variant, config.build);
        row.build_ms = ms_since(build_start);

        const auto solve_start = Clock::now();
        models::SolverSolution lb = models::solve(lb_model, config.solve);
        models::SolverSolution ub = models::solve(ub_model, config.solve);
        row.solve_ms = ms_since(solve_start);

        if (lb.status == milp::Status::optimal && ub.status == milp::Status::optimal) {
            row.status = milp::Status::optimal;
            const bool profit = cell.variant.shortage == Shortage::lost_sales;
            row.lb_objective = lb.objective;
            row.ub_objective = ub.objective;
            row.gap = evaluate::optimality_gap(lb.objective, ub.objective);
            // Certified policy: the conservative side (shifted rows).
            const MilpModel& cons_model = profit ? lb_model : ub_model;
            const models::SolverSolution& cons = profit ? lb : ub;
            models::Policy policy = models::extract_policy(cons, cons_model);
            ModelVariant eval_variant = cell.variant;
            row.exact_cost_of_ub_policy =
                evaluate::exact_policy_cost(policy, bed.instance, eval_variant).objective;
        } else if (lb.status == milp::Status::infeasible ||
                   ub.status == milp::Status::infeasible) {
            row.status = milp::Status::infeasible;
        } else {
            row.status = milp::Status::limit;
        }
        rows[c] = std::move(row);
    };

    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
    std::mutex error_mutex;
    std::string first_error;
    auto worker = [&] {
        for (std::size_t c = next.fetch_add(1); c < cells.size(); c = next.fetch_add(1)) {
            try {
                run_cell(c);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };
    if (threads == 1)
        worker();
    else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!first_error.empty()) throw ConfigError("run_gap_study: " + first_error);

    GapStudyReport report;
    report.rows = std::move(rows);
    std::sort(report.rows.begin(), report.rows.end(), [](const GapStudyRow& a, const GapStudyRow& b) {
        return std::tie(a.instance_id, a.shortage, a.segments, a.strategy) <
               std::tie(b.instance_id, b.shortage, b.segments, b.strategy);
    });

    // Per-(W, strategy) gap quartiles over the optimal rows.
    for (PartitionStrategy s : config.strategies)
        for (int w : config.segment_counts) {
            std::vector<double> gaps;
            for (const auto& row : report.rows)
                if (row.segments == w && row.strategy == s && row.status == milp::Status::optimal)
                    gaps.push_back(row.gap);
            if (gaps.empty()) continue;
            std::sort(gaps.begin(), gaps.end());
            auto quantile = [&](double q) {
                const double pos = q * (static_cast<double>(gaps.size()) - 1);
                const std::size_t i = static_cast<std::size_t>(pos);
                const double f = pos - static_cast<double>(i);
                return i + 1 < gaps.size() ? gaps[i] * (1 - f) + gaps[i + 1] * f : gaps[i];
            };
            report.summaries.push_back(
                {w, s, static_cast<int>(gaps.size()), quantile(0.5), quantile(0.25),
                 quantile(0.75)});
        }
    return report;
}

void write_csv(std::ostream& os, const GapStudyReport& report) {
    os << "instance_id,pattern,a,v,measure,level,cv,shortage,W,partition_strategy,"
          "lb_objective,ub_objective,gap,exact_cost_of_ub_policy,build_ms,solve_ms,status\n";
    os.precision(12);
    for (const auto& r : report.rows) {
        os << r.instance_id << "," << r.pattern << "," << r.fixed_cost << "," << r.unit_cost
           << "," << models::measure_name(r.measure) << "," << r.level << "," << r.cv << ","
           << models::shortage_name(r.shortage) << "," << r.segments << ","
           << strategy_name(r.strategy) << ",";
        if (r.status == milp::Status::optimal)
            os << r.lb_objective << "," << r.ub_objective << "," << r.gap << ","
               << r.exact_cost_of_ub_policy;
        else
            os << ",,,";
        os << "," << r.build_ms << "," << r.solve_ms << "," << milp::status_name(r.status)
           << "\n";
    }
}

void write_summary_csv(std::ostream& os, const GapStudyReport& report) {
    os << "W,partition_strategy,optimal_rows,median_gap,q1_gap,q3_gap\n";
    os.precision(12);
    for (const auto& s : report.summaries)
        os << s.segments << "," << strategy_name(s.strategy) << "," << s.optimal_rows << ","
           << s.median_gap << "," << s.q1_gap << "," << s.q3_gap << "\n";
}

}  // namespace stodyn::bench
