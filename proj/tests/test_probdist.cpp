#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "stodyn/probdist/distribution.hpp"
#include "stodyn/probdist/process.hpp"
#include "support/oracles.hpp"

using stodyn::DegenerateRegionError;
using stodyn::DomainError;
using stodyn::probdist::Convolution;
using stodyn::probdist::convolve;
using stodyn::probdist::DemandProcess;
using stodyn::probdist::Distribution;
using stodyn::probdist::Kind;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

std::vector<Distribution> suite_distributions() {
    return {Distribution::normal(0, 1),      Distribution::normal(100, 30),
            Distribution::poisson(10),       Distribution::exponential(100),
            Distribution::uniform(0, 200),   Distribution::poisson(4)};
}
}  // namespace

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(Distribution::normal(0, 0), DomainError);
    CHECK_THROWS_AS(Distribution::normal(0, -1), DomainError);
    CHECK_THROWS_AS(Distribution::poisson(0), DomainError);
    CHECK_THROWS_AS(Distribution::exponential(-2), DomainError);
    CHECK_THROWS_AS(Distribution::uniform(5, 5), DomainError);
    CHECK_THROWS_AS(Distribution::grid({1, 2}, {0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(Distribution::grid({1, 2}, {0.5, -0.5}), DomainError);

    auto g = Distribution::grid({10, 20, 30}, {0.2, 0.5, 0.3});
    const double mean = 0.2 * 10 + 0.5 * 20 + 0.3 * 30;
    CHECK(g.mean() == doctest::Approx(mean).epsilon(1e-12));
    double var = 0.2 * (10 - mean) * (10 - mean) + 0.5 * (20 - mean) * (20 - mean) +
                 0.3 * (30 - mean) * (30 - mean);
    CHECK(g.variance() == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("quantile examples") {
    CHECK(Distribution::uniform(0, 200).quantile(0.5) == doctest::Approx(100.0));

    // Bisection oracle on the numerically integrated normal CDF.
    auto n = Distribution::normal(100, 10);
    const double q95 = oracles::quantile_by_bisection(
        [](double t) { return oracles::phi((t - 100) / 10) / 10; }, 40, 160, 0.95, 1e-10);
    CHECK(n.quantile(0.95) == doctest::Approx(q95).epsilon(1e-9));
    CHECK(n.quantile(0.95) == doctest::Approx(116.449).epsilon(1e-5));

    // Cumulative-sum oracle over the Poisson pmf.
    auto p4 = Distribution::poisson(4);
    double cum = 0.0;
    int k = 0;
    while (true) {
        cum += std::exp(k * std::log(4.0) - 4.0 - std::lgamma(k + 1.0));
        if (cum >= 0.5) break;
        ++k;
    }
    CHECK(p4.quantile(0.5) == doctest::Approx(static_cast<double>(k)));
    CHECK(p4.quantile(0.5) == doctest::Approx(4.0));

    CHECK_THROWS_AS(n.quantile(0.0), DomainError);
    CHECK_THROWS_AS(n.quantile(1.0), DomainError);
    CHECK_THROWS_AS(n.quantile(-0.3), DomainError);
}

TEST_CASE("conditional means") {
    CHECK(Distribution::uniform(0, 1).conditional_mean(0, 0.5) == doctest::Approx(0.25));

    auto z = Distribution::normal(0, 1);
    // Numeric integration of t*phi(t); closed form -sqrt(2/pi).
    const double lower_half =
        oracles::integrate([](double t) { return t * oracles::phi(t); }, -40, 0, 1e-12) / 0.5;
    CHECK(z.conditional_mean(-kInf, 0) == doctest::Approx(lower_half).epsilon(1e-7));
    CHECK(z.conditional_mean(-kInf, 0) == doctest::Approx(-0.79788).epsilon(1e-4));
    CHECK(z.conditional_mean(0, kInf) == doctest::Approx(0.79788).epsilon(1e-4));

    CHECK_THROWS_AS(Distribution::uniform(0, 1).conditional_mean(2, 3), DegenerateRegionError);

    // Discrete half-open convention includes the left endpoint.
    auto g = Distribution::grid({1, 2, 3}, {0.25, 0.5, 0.25});
    CHECK(g.conditional_mean(2, 3) == doctest::Approx(2.0));
    CHECK(g.conditional_mean(2, kInf) == doctest::Approx((0.5 * 2 + 0.25 * 3) / 0.75));
}

TEST_CASE("complementary loss examples") {
    auto z = Distribution::normal(0, 1);
    const double ora = oracles::complementary_loss_by_quadrature(
        [](double t) { return oracles::phi(t); }, -40, 40, 0.0);
    CHECK(z.complementary_loss(0) == doctest::Approx(ora).epsilon(1e-9));
    CHECK(z.complementary_loss(0) == doctest::Approx(0.39894).epsilon(1e-4));
    CHECK(z.loss(0) == doctest::Approx(0.39894).epsilon(1e-4));

    // Far above the support max(x - w, 0) is always active.
    for (const auto& d : suite_distributions()) {
        const double x = d.mean() + 60 * d.stdev() + 100;
        CHECK(d.complementary_loss(x) == doctest::Approx(x - d.mean()).epsilon(1e-9));
    }
}

TEST_CASE("loss function properties on the suite") {
    for (const auto& d : suite_distributions()) {
        const double lo = d.quantile(0.001) - 2 * d.stdev() - 1;
        const double hi = d.quantile(0.999) + 2 * d.stdev() + 1;
        double prev = -1.0;
        std::vector<double> vals;
        for (int i = 0; i <= 100; ++i) {
            const double x = lo + (hi - lo) * i / 100.0;
            const double v = d.complementary_loss(x);
            CHECK(v >= prev - 1e-9);  // nondecreasing
            prev = v;
            vals.push_back(v);
            // Lemma 1 identity.
            CHECK(std::fabs(d.loss(x) - (v - (x - d.mean()))) <= 1e-9);
        }
        for (std::size_t i = 2; i < vals.size(); ++i)  // convexity
            CHECK(vals[i] - 2 * vals[i - 1] + vals[i - 2] >= -1e-9);
    }
}

TEST_CASE("quantile / cdf round trip for continuous laws") {
    for (const auto& d : {Distribution::normal(10, 3), Distribution::exponential(50),
                          Distribution::uniform(-5, 12)}) {
        for (double p : {0.001, 0.01, 0.2, 0.5, 0.77, 0.99, 0.9999})
            CHECK(d.cdf(d.quantile(p)) == doctest::Approx(p).epsilon(1e-7));
    }
}

TEST_CASE("law of total expectation over random partitions") {
    std::mt19937_64 rng(7);
    for (const auto& d : suite_distributions()) {
        for (int trial = 0; trial < 5; ++trial) {
            const int w = 2 + static_cast<int>(rng() % 7);
            std::vector<double> cuts{0.0};
            for (int i = 1; i < w; ++i)
                cuts.push_back(std::uniform_real_distribution<double>(0.01, 0.99)(rng));
            cuts.push_back(1.0);
            std::sort(cuts.begin(), cuts.end());
            double mean = 0.0;
            bool ok = true;
            for (int i = 0; i < w; ++i) {
                if (cuts[i + 1] - cuts[i] < 1e-6) {
                    ok = false;
                    break;
                }
                mean += (cuts[i + 1] - cuts[i]) * d.mass_slice_mean(cuts[i], cuts[i + 1]);
            }
            if (ok) CHECK(mean == doctest::Approx(d.mean()).epsilon(1e-7));
        }
    }
}

TEST_CASE("closed-form convolutions") {
    DemandProcess normals({Distribution::normal(100, 10), Distribution::normal(50, 10)});
    Convolution c = convolve(normals, 1, 2);
    CHECK(c.law.kind() == Kind::normal);
    CHECK(c.law.mean() == doctest::Approx(150.0));
    CHECK(c.law.stdev() == doctest::Approx(14.142).epsilon(1e-4));

    DemandProcess poissons({Distribution::poisson(3), Distribution::poisson(4)});
    Convolution cp = convolve(poissons, 1, 2);
    CHECK(cp.law.kind() == Kind::poisson);
    CHECK(cp.law.mean() == doctest::Approx(7.0));

    CHECK_THROWS_AS(convolve(normals, 2, 1), std::out_of_range);
    CHECK_THROWS_AS(convolve(normals, 1, 3), std::out_of_range);
}

TEST_CASE("grid convolution against a Monte Carlo oracle") {
    DemandProcess mix({Distribution::normal(100, 30), Distribution::exponential(100)});
    Convolution c = convolve(mix, 1, 2);
    CHECK(c.law.kind() == Kind::grid);

    // Exact moment matching (the invariant is tighter than the MC check).
    CHECK(c.law.mean() == doctest::Approx(200.0).epsilon(1e-9));
    CHECK(c.law.variance() == doctest::Approx(10900.0).epsilon(1e-9));

    // Monte Carlo oracle with 1e6 draws.
    std::mt19937_64 rng(123);
    std::normal_distribution<double> nd(100, 30);
    std::exponential_distribution<double> ed(0.01);
    double sum = 0, sumsq = 0;
    const int reps = 1000000;
    for (int i = 0; i < reps; ++i) {
        const double v = nd(rng) + ed(rng);
        sum += v;
        sumsq += v * v;
    }
    const double mc_mean = sum / reps;
    const double mc_var = sumsq / reps - mc_mean * mc_mean;
    CHECK(std::fabs(c.law.mean() - mc_mean) < 0.5);
    CHECK(std::fabs(c.law.variance() - mc_var) / mc_var < 0.01);

    // CDF shape sanity against the same draws at a few points.
    for (double x : {120.0, 200.0, 320.0}) {
        std::mt19937_64 rng2(321);
        std::normal_distribution<double> nd2(100, 30);
        std::exponential_distribution<double> ed2(0.01);
        int count = 0;
        for (int i = 0; i < 200000; ++i)
            if (nd2(rng2) + ed2(rng2) <= x) ++count;
        CHECK(c.law.cdf(x) == doctest::Approx(count / 200000.0).epsilon(0.02));
    }
}

TEST_CASE("convolution moment invariants on mixed ranges") {
    DemandProcess table1({Distribution::normal(100, 30), Distribution::poisson(100),
                          Distribution::exponential(100), Distribution::uniform(0, 200),
                          Distribution::normal(80, 24)});
    for (int j = 1; j <= 5; ++j)
        for (int t = j; t <= 5; ++t) {
            Convolution c = convolve(table1, j, t);
            double mu = 0, var = 0;
            for (int k = j; k <= t; ++k) {
                mu += table1.period(k).mean();
                var += table1.period(k).variance();
            }
            CHECK(std::fabs(c.law.mean() - mu) <= 1e-6 * std::max(1.0, std::fabs(mu)));
            CHECK(std::fabs(c.law.variance() - var) <= 1e-6 * std::max(1.0, var));
        }
}

TEST_CASE("point mass behaves as a degenerate law") {
    auto p = Distribution::point_mass(100);
    CHECK(p.mean() == 100.0);
    CHECK(p.variance() == 0.0);
    CHECK(p.quantile(0.3) == 100.0);
    CHECK(p.quantile(0.99) == 100.0);
    CHECK(p.complementary_loss(99) == 0.0);
    CHECK(p.complementary_loss(103) == doctest::Approx(3.0));
}
