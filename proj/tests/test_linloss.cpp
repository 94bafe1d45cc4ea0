#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stodyn/linloss/partition.hpp"
#include "stodyn/linloss/linearization.hpp"
#include "stodyn/linloss/search.hpp"
#include "stodyn/probdist/process.hpp"
#include "support/oracles.hpp"

using namespace stodyn::linloss;
using stodyn::DomainError;
using stodyn::probdist::Distribution;

namespace {
std::vector<Distribution> acceptance_suite() {
    return {Distribution::normal(0, 1), Distribution::normal(100, 30),
            Distribution::poisson(10), Distribution::exponential(100),
            Distribution::uniform(0, 200)};
}
}  // namespace

TEST_CASE("uniform partition") {
    CHECK(uniform_partition(2).masses() == std::vector<double>{0.5, 0.5});
    CHECK(uniform_partition(4).masses() == std::vector<double>{0.25, 0.25, 0.25, 0.25});
    const Partition seven = uniform_partition(7);
    double sum = 0.0;
    for (double p : seven.masses()) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(uniform_partition(0), DomainError);
}

TEST_CASE("linearize the standard normal with two regions") {
    auto lin = linearize(Distribution::normal(0, 1), uniform_partition(2));
    // Oracle: conditional means from quadrature, error from the loss oracle
    // at the breakpoints.
    const double m2 =
        oracles::integrate([](double t) { return t * oracles::phi(t); }, 0, 40) / 0.5;
    CHECK(lin.conditional_means[0] == doctest::Approx(-m2).epsilon(1e-7));
    CHECK(lin.conditional_means[1] == doctest::Approx(+m2).epsilon(1e-7));
    CHECK(lin.conditional_means[0] == doctest::Approx(-0.79788).epsilon(1e-4));

    auto loss_at = [](double x) {
        return oracles::complementary_loss_by_quadrature(
            [](double t) { return oracles::phi(t); }, -40, 40, x);
    };
    const double jensen_at_bp = 0.0;  // segments 0 and 1 meet at the first breakpoint
    const double e2 = loss_at(-m2) - jensen_at_bp;
    CHECK(lin.max_error == doctest::Approx(e2).epsilon(1e-6));
    CHECK(lin.max_error == doctest::Approx(0.1212).epsilon(1e-2));
    CHECK(std::fabs(lin.max_error - 0.1212) < 1e-3);
}

TEST_CASE("linearize a point mass") {
    auto lin = linearize(Distribution::point_mass(100), uniform_partition(5));
    for (double m : lin.conditional_means) CHECK(m == doctest::Approx(100.0));
    CHECK(lin.max_error == doctest::Approx(0.0));
}

TEST_CASE("normal scaling reproduces the generic linearization") {
    auto part = Partition({0.2, 0.5, 0.3});
    auto std_lin = linearize(Distribution::normal(0, 1), part);
    auto scaled = std_lin.scaled(100.0, 10.0);
    auto direct = linearize(Distribution::normal(100, 10), part);
    for (int i = 0; i < 3; ++i)
        CHECK(scaled.conditional_means[static_cast<std::size_t>(i)] ==
              doctest::Approx(direct.conditional_means[static_cast<std::size_t>(i)])
                  .epsilon(1e-9));
    CHECK(scaled.max_error == doctest::Approx(direct.max_error).epsilon(1e-9));
}

TEST_CASE("bound_values basics") {
    auto lin = linearize(Distribution::normal(0, 1), uniform_partition(2));
    auto [lo_far, up_far] = bound_values(-1e9, lin);
    CHECK(lo_far == 0.0);
    CHECK(up_far == doctest::Approx(lin.max_error));

    // Jensen is tight at x = 0 (region boundary of the 2-partition).
    auto [lo0, up0] = bound_values(0.0, lin);
    CHECK(lo0 == doctest::Approx(0.39894).epsilon(1e-4));
    CHECK(up0 >= lo0);

    // At the breakpoint the exact value meets the upper bound.
    const double bp = lin.conditional_means[1];
    auto [lob, upb] = bound_values(bp, lin);
    const double exact = Distribution::normal(0, 1).complementary_loss(bp);
    CHECK(lob == doctest::Approx(bp).epsilon(1e-6));
    CHECK(exact <= upb + 1e-12);
    CHECK(exact >= lob - 1e-12);
    CHECK(upb == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("sandwich property over the suite") {
    for (const auto& d : acceptance_suite()) {
        for (int w = 2; w <= 11; ++w) {
            auto lin = linearize(d, uniform_partition(w));
            // Convex slopes within [0,1].
            const auto& cum = lin.partition.cumulative();
            for (std::size_t i = 0; i < cum.size(); ++i) {
                CHECK(cum[i] >= 0.0);
                CHECK(cum[i] <= 1.0 + 1e-15);
                if (i > 0) CHECK(cum[i] >= cum[i - 1]);
            }
            const double lo_q = d.quantile(0.001), hi_q = d.quantile(0.999);
            for (int i = 0; i <= 100; ++i) {
                const double x = lo_q + (hi_q - lo_q) * i / 100.0;
                const double exact = d.complementary_loss(x);
                auto [lo, up] = lin.bound_values(x);
                CHECK(lo <= exact + 1e-9);
                CHECK(exact <= up + 1e-9);
            }
            // Tightness at the region-boundary quantiles.
            for (int i = 1; i < w; ++i) {
                const double b = d.quantile(lin.partition.cumulative()[static_cast<std::size_t>(i - 1)]);
                CHECK(lin.lower_bound(b) ==
                      doctest::Approx(d.complementary_loss(b)).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("conditional means ordering") {
    for (const auto& d : acceptance_suite()) {
        auto lin = linearize(d, uniform_partition(7));
        for (std::size_t i = 1; i < lin.conditional_means.size(); ++i) {
            CHECK(lin.conditional_means[i] >= lin.conditional_means[i - 1]);
            if (!d.is_discrete())
                CHECK(lin.conditional_means[i] > lin.conditional_means[i - 1]);
        }
        // Law of total expectation.
        double mean = 0.0;
        for (int i = 0; i < lin.regions(); ++i)
            mean += lin.partition.mass(i) * lin.conditional_means[static_cast<std::size_t>(i)];
        CHECK(mean == doctest::Approx(d.mean()).epsilon(1e-6));
    }
}

TEST_CASE("partition search improves on uniform and is deterministic") {
    std::vector<Distribution> dists{Distribution::normal(0, 1)};
    SearchConfig cfg;
    cfg.population_size = 50;
    cfg.seed = 42;
    auto res1 = search_partition(dists, 2, cfg);
    auto res2 = search_partition(dists, 2, cfg);
    CHECK(res1.partition.masses() == res2.partition.masses());

    const double uniform_err = minimax_error(dists, uniform_partition(2));
    CHECK(res1.minimax_error <= uniform_err + 1e-12);

    // Thread-count independence.
    SearchConfig cfg2 = cfg;
    cfg2.threads = 3;
    auto res3 = search_partition(dists, 2, cfg2);
    CHECK(res1.partition.masses() == res3.partition.masses());

    // Degenerate law: any partition has zero error.
    auto degenerate = search_partition({Distribution::point_mass(5)}, 3, cfg);
    CHECK(degenerate.minimax_error == doctest::Approx(0.0));
}

TEST_CASE("partition search on a heterogeneous set beats uniform") {
    std::vector<Distribution> dists{Distribution::normal(100, 30), Distribution::exponential(100),
                                    Distribution::uniform(0, 200)};
    SearchConfig cfg;
    cfg.population_size = 120;
    cfg.seed = 9;
    cfg.max_sweeps = 60;
    auto res = search_partition(dists, 5, cfg);
    const double uniform_err = minimax_error(dists, uniform_partition(5));
    CHECK(res.minimax_error <= uniform_err);
    CHECK(res.minimax_error < uniform_err - 1e-6);  // strict improvement here
}

TEST_CASE("standard normal table") {
    // Symmetric minimax optimum for two regions.
    const auto& t2 = standard_normal_table(2);
    CHECK(t2.partition.mass(0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(t2.max_error == doctest::Approx(0.120656).epsilon(1e-4));

    // Error decay and dominance over the uniform partition.
    double prev = 1e9;
    for (int w = 2; w <= 11; ++w) {
        const auto& tw = standard_normal_table(w);
        CHECK(tw.max_error < prev);
        prev = tw.max_error;
        const double uni = minimax_error({Distribution::normal(0, 1)}, uniform_partition(w));
        CHECK(tw.max_error <= uni + 1e-12);
    }

    // Scaling: table applied to normal(100,10).
    const auto& t4 = standard_normal_table(4);
    auto scaled = t4.scaled(100, 10);
    for (int i = 0; i < 4; ++i)
        CHECK(scaled.conditional_means[static_cast<std::size_t>(i)] ==
              doctest::Approx(100 + 10 * t4.conditional_means[static_cast<std::size_t>(i)]));

    CHECK_THROWS_AS(standard_normal_table(0), DomainError);
    CHECK_THROWS_AS(standard_normal_table(21), DomainError);
}

TEST_CASE("equal-ripple structure of the table") {
    // All breakpoint errors of the minimax table coincide.
    const auto& t7 = standard_normal_table(7);
    auto z = Distribution::normal(0, 1);
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 7; ++i) {
        const double b = t7.conditional_means[static_cast<std::size_t>(i)];
        const double err = z.complementary_loss(b) - t7.lower_bound(b);
        lo = std::min(lo, err);
        hi = std::max(hi, err);
    }
    CHECK(hi - lo < 1e-7);
    CHECK(hi == doctest::Approx(t7.max_error).epsilon(1e-9));
}

TEST_CASE("dump format") {
    auto lin = linearize(Distribution::normal(0, 1), uniform_partition(2));
    std::istringstream in(lin.dump());
    double p, m;
    in >> p >> m;
    CHECK(p == doctest::Approx(0.5));
    CHECK(m == doctest::Approx(lin.conditional_means[0]));
    in >> p >> m;
    CHECK(p == doctest::Approx(0.5));
    std::string tag;
    double e;
    in >> tag >> e;
    CHECK(tag == "e_W");
    CHECK(e == doctest::Approx(lin.max_error));
}

TEST_CASE("step clipping reports a warning flag") {
    std::vector<Distribution> dists{Distribution::normal(0, 1)};
    SearchConfig cfg;
    cfg.population_size = 1;
    cfg.seed = 1;
    cfg.step_size = 0.9;  // larger than any incumbent mass
    auto res = search_partition(dists, 3, cfg);
    CHECK(res.step_clipped);
    CHECK_THROWS_AS(([&] {
                        SearchConfig bad;
                        bad.step_size = 0.0;
                        search_partition(dists, 3, bad);
                    }()),
                    DomainError);
}
