#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stodyn/bench/testbed.hpp"
#include "stodyn/linloss/search.hpp"
#include "stodyn/models/solve.hpp"

namespace stodyn::bench {

enum class PartitionStrategy { uniform, normal_table, search };

const char* strategy_name(PartitionStrategy s);

struct GapStudyConfig {
    std::vector<int> segment_counts{2, 3, 4, 7, 11};
    std::vector<PartitionStrategy> strategies{PartitionStrategy::normal_table};
    models::SolveOptions solve;
    linloss::SearchConfig search;  // the search strategy's controls
    models::BuildOptions build;
    int threads = 0;  // worker pool size; 0 = hardware default
};

struct GapStudyRow {
    std::string instance_id;
    std::string pattern;
    double fixed_cost = 0, unit_cost = 0, level = 0, cv = 0;
    models::Measure measure{};
    models::Shortage shortage{};
    int segments = 0;
    PartitionStrategy strategy{};
    milp::Status status = milp::Status::limit;
    double lb_objective = 0, ub_objective = 0, gap = 0, exact_cost_of_ub_policy = 0;
    double build_ms = 0, solve_ms = 0;
};

struct GapStudySummary {
    int segments = 0;
    PartitionStrategy strategy{};
    int optimal_rows = 0;
    double median_gap = 0, q1_gap = 0, q3_gap = 0;
};

struct GapStudyReport {
    std::vector<GapStudyRow> rows;          // canonical (sorted) order
    std::vector<GapStudySummary> summaries;
};

// One cell per (instance, variant, W, partition strategy): solves the LB and
// UB models, evaluates the certified policy exactly, and records timing and
// status. Variants whose measure differs from an instance's are skipped.
GapStudyReport run_gap_study(const std::vector<BedInstance>& instances,
                             const std::vector<models::ModelVariant>& variants,
                             const GapStudyConfig& config);

void write_csv(std::ostream& os, const GapStudyReport& report);
void write_summary_csv(std::ostream& os, const GapStudyReport& report);

}  // namespace stodyn::bench
