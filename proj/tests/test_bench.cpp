#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "stodyn/bench/gap_study.hpp"
#include "stodyn/bench/testbed.hpp"
#include "stodyn/evaluate/evaluate.hpp"

using namespace stodyn;
using namespace stodyn::bench;
using models::Direction;
using models::Measure;
using models::ModelVariant;
using models::Shortage;
using probdist::Kind;

TEST_CASE("paper grid cardinality") {
    TestBedConfig cfg;
    cfg.patterns = all_patterns();
    CHECK(generate_testbed(cfg).size() == 810);
}

TEST_CASE("factorial count follows the factor lists") {
    TestBedConfig cfg;
    cfg.patterns = {"STA", "SIN1"};
    cfg.fixed_costs = {500};
    cfg.unit_costs = {2, 5};
    cfg.levels = {0.9};
    cfg.cvs = {0.1, 0.2, 0.3};
    CHECK(generate_testbed(cfg).size() == 2 * 1 * 2 * 1 * 3);
}

TEST_CASE("stationary pattern instance") {
    TestBedConfig cfg;
    cfg.patterns = {"STA"};
    cfg.fixed_costs = {500};
    cfg.unit_costs = {2};
    cfg.levels = {0.9};
    cfg.cvs = {0.2};
    auto bed = generate_testbed(cfg);
    REQUIRE(bed.size() == 1);
    const auto& inst = bed[0].instance;
    CHECK(inst.horizon() == 15);
    CHECK(inst.holding_cost == 1.0);
    for (int t = 1; t <= 15; ++t) {
        CHECK(inst.demand.period(t).kind() == Kind::normal);
        CHECK(inst.demand.period(t).mean() == doctest::Approx(100.0));
        CHECK(inst.demand.period(t).stdev() == doctest::Approx(20.0));
    }
}

TEST_CASE("test bed regeneration is identical") {
    TestBedConfig cfg;
    cfg.patterns = {"RAND", "LCY1"};
    cfg.seed = 77;
    auto bed1 = generate_testbed(cfg);
    auto bed2 = generate_testbed(cfg);
    REQUIRE(bed1.size() == bed2.size());
    for (std::size_t i = 0; i < bed1.size(); ++i) {
        CHECK(bed1[i].instance.id == bed2[i].instance.id);
        for (int t = 1; t <= 15; ++t) {
            CHECK(bed1[i].instance.demand.period(t).mean() ==
                  bed2[i].instance.demand.period(t).mean());
            CHECK(bed1[i].instance.demand.period(t).stdev() ==
                  bed2[i].instance.demand.period(t).stdev());
        }
    }
    TestBedConfig other = cfg;
    other.seed = 78;
    auto bed3 = generate_testbed(other);
    bool differs = false;
    for (int t = 1; t <= 15; ++t)
        if (bed3[0].instance.demand.period(t).mean() != bed1[0].instance.demand.period(t).mean())
            differs = true;
    CHECK(differs);  // RAND pattern depends on the seed
}

TEST_CASE("heterogeneous process follows the kind rotation") {
    std::vector<double> means(15, 100.0);
    auto process = heterogeneous_process(15, means);
    CHECK(process.period(1).kind() == Kind::normal);
    CHECK(process.period(1).stdev() == doctest::Approx(30.0));
    CHECK(process.period(2).kind() == Kind::poisson);
    CHECK(process.period(3).kind() == Kind::exponential);
    CHECK(process.period(3).variance() == doctest::Approx(10000.0));
    CHECK(process.period(4).kind() == Kind::uniform);
    CHECK(process.period(4).param_b() == doctest::Approx(200.0));
    CHECK(process.period(5).kind() == Kind::normal);
    CHECK(process.period(13).kind() == Kind::normal);
    CHECK(process.period(15).kind() == Kind::exponential);

    CHECK_THROWS_AS(heterogeneous_process(15, {100.0}), ConfigError);
    means[3] = -5.0;
    CHECK_THROWS_AS(heterogeneous_process(15, means), DomainError);
}

TEST_CASE("empty factor lists are rejected") {
    TestBedConfig cfg;
    CHECK_THROWS_AS(generate_testbed(cfg), ConfigError);  // no patterns
    cfg.patterns = {"STA"};
    cfg.levels.clear();
    CHECK_THROWS_AS(generate_testbed(cfg), ConfigError);
}

TEST_CASE("small gap study produces consistent rows") {
    TestBedConfig cfg;
    cfg.patterns = {"STA", "SIN2"};
    cfg.horizon = 4;
    cfg.fixed_costs = {250};
    cfg.unit_costs = {2};
    cfg.levels = {0.9};
    cfg.cvs = {0.2};
    auto bed = generate_testbed(cfg);

    GapStudyConfig study;
    study.segment_counts = {2, 4};
    study.strategies = {PartitionStrategy::normal_table, PartitionStrategy::uniform};
    std::vector<ModelVariant> variants{
        ModelVariant{Measure::alpha, Shortage::backorder, Direction::upper_bound}};
    GapStudyReport report = run_gap_study(bed, variants, study);
    CHECK(report.rows.size() == 2 * 2 * 2);

    for (const auto& row : report.rows) {
        REQUIRE(row.status == milp::Status::optimal);
        CHECK(row.lb_objective <= row.ub_objective + 1e-6);
        // The gap column recomputes from the same row.
        CHECK(row.gap ==
              doctest::Approx(evaluate::optimality_gap(row.lb_objective, row.ub_objective))
                  .epsilon(1e-12));
        CHECK(row.lb_objective - 1e-6 <= row.exact_cost_of_ub_policy);
        CHECK(row.exact_cost_of_ub_policy <= row.ub_objective + 1e-6);
        CHECK(row.solve_ms >= 0.0);
    }

    // Canonical row order is independent of the worker count.
    GapStudyConfig serial = study;
    serial.threads = 1;
    GapStudyReport r2 = run_gap_study(bed, variants, serial);
    REQUIRE(r2.rows.size() == report.rows.size());
    for (std::size_t i = 0; i < r2.rows.size(); ++i) {
        CHECK(r2.rows[i].instance_id == report.rows[i].instance_id);
        CHECK(r2.rows[i].segments == report.rows[i].segments);
        CHECK(r2.rows[i].lb_objective == doctest::Approx(report.rows[i].lb_objective));
    }

    std::ostringstream csv;
    write_csv(csv, report);
    CHECK(csv.str().find("instance_id,pattern,a,v,measure,level,cv,shortage,W,"
                         "partition_strategy,lb_objective,ub_objective,gap,"
                         "exact_cost_of_ub_policy,build_ms,solve_ms,status") == 0);
    std::ostringstream summary;
    write_summary_csv(summary, report);
    CHECK(summary.str().find("W,partition_strategy") == 0);
}
