#pragma once

#include <cstdint>
#include <vector>

#include "stodyn/milp/problem.hpp"

namespace stodyn::milp {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
    LpStatus status = LpStatus::iteration_limit;
    double objective = 0.0;  // c'x in minimize sense, without constant
    long iterations = 0;
};

// Bounded-variable simplex over the columns of a Problem plus one slack per
// row (a'x - s = 0, s in [row_lb, row_ub]). Dense explicit basis inverse;
// primal two-phase from the slack basis and a dual simplex for re-solves
// after bound changes. Minimizes internally; callers handle sense.
class SimplexSolver {
public:
    explicit SimplexSolver(const Problem& problem);

    // Variable bound changes between solves (structural variables only).
    void set_bounds(int var, double lb, double ub);

    LpResult solve_from_scratch();
    // Dual simplex from the current basis; falls back to a fresh primal
    // solve when the warm start is unusable.
    LpResult resolve();

    struct Basis {
        std::vector<std::int32_t> basic;
        std::vector<std::uint8_t> state;
    };
    Basis save_basis() const;
    void load_basis(const Basis& basis);
    bool has_basis() const { return !basic_.empty(); }

    // Structural variable values of the last solve.
    std::vector<double> primal_values() const;
    double objective_value() const;  // c'x, minimize sense, no constant

private:
    enum State : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

    int m_ = 0;  // rows
    int n_ = 0;  // structural columns
    std::vector<std::vector<std::pair<int, double>>> cols_;  // structural, sparse
    std::vector<double> cost_;                               // minimize sense, slacks 0
    std::vector<double> lb_, ub_;                            // structural + slacks

    std::vector<std::int32_t> basic_;   // size m: column index in each basis row
    std::vector<std::uint8_t> state_;   // size n+m
    std::vector<double> binv_;          // m*m row-major
    std::vector<double> xb_;            // basic values by basis row
    bool factorized_ = false;           // binv_ matches basic_
    long iterations_ = 0;

    double nonbasic_value(int j) const;
    void column_times(int j, std::vector<double>& out) const;       // out = B^-1 A_j
    double row_dot_column(const std::vector<double>& row, int j) const;
    void compute_duals(const std::vector<double>& cb, std::vector<double>& y) const;
    bool refactor();                 // rebuild B^-1 and xb from states
    void reset_to_slack_basis();
    void pivot(int row, int col, const std::vector<double>& w);
    void recompute_xb();

    LpResult primal_loop(long max_iters);
    LpResult dual_loop(long max_iters);
};

}  // namespace stodyn::milp
