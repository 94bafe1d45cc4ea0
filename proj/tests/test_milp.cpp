#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "stodyn/milp/branch_and_bound.hpp"
#include "stodyn/milp/lp_format.hpp"
#include "stodyn/milp/problem.hpp"
#include "stodyn/milp/simplex.hpp"

using namespace stodyn::milp;

namespace {
Solution mip(const Problem& p, SolverConfig cfg = {}) { return branch_and_bound(p, cfg); }
}  // namespace

TEST_CASE("two-variable LP with box and row constraints") {
    Problem p;
    const int x = p.add_variable("x", 0, 3, -1, false);
    const int y = p.add_variable("y", 0, 2, -2, false);
    p.add_row("cap", -kInf, 4, {x, y}, {1, 1});
    Solution s = mip(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(-6.0));
    CHECK(s.values[static_cast<std::size_t>(x)] == doctest::Approx(2.0));
    CHECK(s.values[static_cast<std::size_t>(y)] == doctest::Approx(2.0));
}

TEST_CASE("ranged row and maximization") {
    Problem p;
    p.sense = Sense::maximize;
    const int x = p.add_variable("x", 0, 10, 1, false);
    const int y = p.add_variable("y", 0, 10, 1, false);
    p.add_row("band", 1, 2, {x, y}, {1, 1});
    Solution s = mip(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(2.0));
}

TEST_CASE("free variables") {
    Problem q;
    const int qx = q.add_variable("x", -kInf, kInf, 0, false);
    const int qy = q.add_variable("y", -kInf, kInf, 1, false);
    q.add_row("a", -3, kInf, {qy, qx}, {1, -1});
    q.add_row("b", 3, kInf, {qy, qx}, {1, 1});
    Solution s = mip(q);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(0.0));
    CHECK(s.values[static_cast<std::size_t>(qx)] == doctest::Approx(3.0));
}

TEST_CASE("equality system") {
    Problem p;
    const int x = p.add_variable("x", -kInf, kInf, 1, false);
    const int y = p.add_variable("y", -kInf, kInf, 3, false);
    p.add_row("sum", 3, 3, {x, y}, {1, 1});
    p.add_row("diff", 1, 1, {x, y}, {1, -1});
    Solution s = mip(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(5.0));
    CHECK(s.values[static_cast<std::size_t>(x)] == doctest::Approx(2.0));
    CHECK(s.values[static_cast<std::size_t>(y)] == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded detection") {
    Problem p;
    const int x = p.add_variable("x", 0, 10, 1, false);
    p.add_row("lo", 2, kInf, {x}, {1});
    p.add_row("hi", -kInf, 1, {x}, {1});
    CHECK(mip(p).status == Status::infeasible);

    Problem q;
    q.add_variable("x", 0, kInf, -1, false);
    CHECK(mip(q).status == Status::unbounded);
}

TEST_CASE("no-row problem solves by bound flips") {
    Problem p;
    const int x = p.add_variable("x", 1, 5, -2, false);
    Solution s = mip(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(-10.0));
    CHECK(s.values[static_cast<std::size_t>(x)] == doctest::Approx(5.0));
}

TEST_CASE("fixed variables and objective constant") {
    Problem p;
    p.objective_constant = 7.5;
    const int x = p.add_variable("x", 2, 2, 3, false);
    const int y = p.add_variable("y", 0, 1, 1, false);
    p.add_row("r", 0, kInf, {y, x}, {1, 0.5});
    Solution s = mip(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(7.5 + 6.0));
    CHECK(s.values[static_cast<std::size_t>(x)] == doctest::Approx(2.0));
}

TEST_CASE("binary knapsack agrees with brute force") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 6 + static_cast<int>(rng() % 5);
        std::vector<double> value(static_cast<std::size_t>(n)), weight(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            value[static_cast<std::size_t>(i)] = 1 + static_cast<double>(rng() % 100);
            weight[static_cast<std::size_t>(i)] = 1 + static_cast<double>(rng() % 50);
        }
        double cap = 0;
        for (double w : weight) cap += w;
        cap *= 0.4;

        Problem p;
        p.sense = Sense::maximize;
        std::vector<int> vars;
        std::vector<double> coef;
        for (int i = 0; i < n; ++i) {
            vars.push_back(p.add_variable("x" + std::to_string(i), 0, 1,
                                          value[static_cast<std::size_t>(i)], true));
            coef.push_back(weight[static_cast<std::size_t>(i)]);
        }
        p.add_row("cap", -kInf, cap, vars, coef);
        Solution s = mip(p);
        REQUIRE(s.status == Status::optimal);

        double best = 0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            double v = 0, w = 0;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) {
                    v += value[static_cast<std::size_t>(i)];
                    w += weight[static_cast<std::size_t>(i)];
                }
            if (w <= cap) best = std::max(best, v);
        }
        CHECK(s.objective == doctest::Approx(best).epsilon(1e-9));
        CHECK(p.max_integer_violation(s.values) < 1e-6);
        CHECK(p.max_violation(s.values) < 1e-6);
    }
}

TEST_CASE("mixed-integer model with big-M structure") {
    // min 10 d1 + 10 d2 + x1 + x2 ; x1 + x2 >= 7 ; x_i <= 6 d_i.
    Problem p;
    const int d1 = p.add_variable("d1", 0, 1, 10, true);
    const int d2 = p.add_variable("d2", 0, 1, 10, true);
    const int x1 = p.add_variable("x1", 0, kInf, 1, false);
    const int x2 = p.add_variable("x2", 0, kInf, 1, false);
    p.add_row("demand", 7, kInf, {x1, x2}, {1, 1});
    p.add_row("g1", -kInf, 0, {x1, d1}, {1, -6});
    p.add_row("g2", -kInf, 0, {x2, d2}, {1, -6});
    Solution s = mip(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(27.0));
    CHECK(s.nodes >= 1);
}

TEST_CASE("infeasible MILP") {
    Problem p;
    const int d = p.add_variable("d", 0, 1, 1, true);
    p.add_row("half", 0.4, 0.6, {d}, {1});
    CHECK(mip(p).status == Status::infeasible);
}

TEST_CASE("warm-started resolves match cold solves after bound changes") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int m = 1 + static_cast<int>(rng() % 5);
        Problem p;
        std::uniform_real_distribution<double> c(-5, 5), u(1, 10), a(-3, 3);
        for (int j = 0; j < n; ++j) p.add_variable("x" + std::to_string(j), 0, u(rng), c(rng), false);
        for (int r = 0; r < m; ++r) {
            std::vector<int> idx;
            std::vector<double> coef;
            for (int j = 0; j < n; ++j) {
                idx.push_back(j);
                coef.push_back(a(rng));
            }
            const double rhs = a(rng) * 2;
            if (rng() % 3 == 0)
                p.add_row("r", rhs, rhs + u(rng), idx, coef);
            else if (rng() % 2 == 0)
                p.add_row("r", rhs, kInf, idx, coef);
            else
                p.add_row("r", -kInf, rhs, idx, coef);
        }
        SimplexSolver warm(p);
        LpResult first = warm.solve_from_scratch();
        if (first.status != LpStatus::optimal) continue;

        // Tighten a couple of variable bounds, then compare warm vs cold.
        Problem q = p;
        for (int k = 0; k < 2; ++k) {
            const int j = static_cast<int>(rng() % n);
            const double mid = 0.3 * p.upper()[static_cast<std::size_t>(j)];
            if (rng() % 2 == 0) {
                q.set_bounds(j, mid, p.upper()[static_cast<std::size_t>(j)]);
            } else {
                q.set_bounds(j, 0, mid);
            }
            warm.set_bounds(j, q.lower()[static_cast<std::size_t>(j)],
                            q.upper()[static_cast<std::size_t>(j)]);
        }
        LpResult re = warm.resolve();
        SimplexSolver cold(q);
        LpResult fresh = cold.solve_from_scratch();
        REQUIRE(re.status == fresh.status);
        if (re.status == LpStatus::optimal) {
            CHECK(re.objective == doctest::Approx(fresh.objective).epsilon(1e-7));
            CHECK(q.max_violation(warm.primal_values()) < 1e-6);
            ++checked;
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("time limit honored") {
    Problem p;
    p.sense = Sense::maximize;
    std::mt19937_64 rng(5);
    std::vector<int> vars;
    std::vector<double> coef;
    for (int i = 0; i < 40; ++i) {
        vars.push_back(p.add_variable("x" + std::to_string(i), 0, 1,
                                      1 + static_cast<double>(rng() % 97), true));
        coef.push_back(1 + static_cast<double>(rng() % 53));
    }
    double cap = 0;
    for (double w : coef) cap += w;
    p.add_row("cap", -kInf, 0.5 * cap, vars, coef);
    SolverConfig cfg;
    cfg.time_limit_seconds = 0.0;
    Solution s = mip(p, cfg);
    CHECK(s.status == Status::limit);
}

TEST_CASE("LP text export") {
    Problem p;
    p.sense = Sense::minimize;
    p.objective_constant = 2;
    const int x = p.add_variable("x", 0, 4, 1.5, false);
    const int d = p.add_variable("d", 0, 1, 3, true);
    p.add_row("link", -kInf, 0, {x, d}, {1, -4});
    p.add_row("need", 1, kInf, {x}, {1});
    const std::string text = to_lp_string(p);
    CHECK(text.find("Minimize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("Generals") != std::string::npos);
    CHECK(text.find("link") != std::string::npos);
    CHECK(text.find("x") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
}
