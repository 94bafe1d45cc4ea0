#include "stodyn/milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stodyn::milp {

namespace {
constexpr double kDualTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr double kPivotTol = 1e-8;
constexpr int kRefactorInterval = 128;

double feas_tol(double bound) { return kFeasTol * (1.0 + std::fabs(bound)); }
}  // namespace

SimplexSolver::SimplexSolver(const Problem& problem) {
    m_ = problem.num_rows();
    n_ = problem.num_variables();
    cols_.assign(static_cast<std::size_t>(n_), {});
    const auto& rows = problem.rows();
    for (int r = 0; r < m_; ++r)
        for (std::size_t k = 0; k < rows[static_cast<std::size_t>(r)].idx.size(); ++k)
            cols_[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)].idx[k])].push_back(
                {r, rows[static_cast<std::size_t>(r)].coef[k]});

    const double sign = problem.sense == Sense::maximize ? -1.0 : 1.0;
    cost_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    lb_.resize(static_cast<std::size_t>(n_ + m_));
    ub_.resize(static_cast<std::size_t>(n_ + m_));
    for (int j = 0; j < n_; ++j) {
        cost_[static_cast<std::size_t>(j)] = sign * problem.objective()[static_cast<std::size_t>(j)];
        lb_[static_cast<std::size_t>(j)] = problem.lower()[static_cast<std::size_t>(j)];
        ub_[static_cast<std::size_t>(j)] = problem.upper()[static_cast<std::size_t>(j)];
    }
    for (int r = 0; r < m_; ++r) {
        lb_[static_cast<std::size_t>(n_ + r)] = rows[static_cast<std::size_t>(r)].lb;
        ub_[static_cast<std::size_t>(n_ + r)] = rows[static_cast<std::size_t>(r)].ub;
    }
}

void SimplexSolver::set_bounds(int var, double lb, double ub) {
    lb_[static_cast<std::size_t>(var)] = lb;
    ub_[static_cast<std::size_t>(var)] = ub;
}

double SimplexSolver::nonbasic_value(int j) const {
    switch (state_[static_cast<std::size_t>(j)]) {
        case kAtLower: return lb_[static_cast<std::size_t>(j)];
        case kAtUpper: return ub_[static_cast<std::size_t>(j)];
        default: return 0.0;
    }
}

void SimplexSolver::column_times(int j, std::vector<double>& out) const {
    out.assign(static_cast<std::size_t>(m_), 0.0);
    if (j >= n_) {
        // Slack column: -e_r.
        const int r = j - n_;
        for (int i = 0; i < m_; ++i)
            out[static_cast<std::size_t>(i)] = -binv_[static_cast<std::size_t>(i) * m_ + r];
        return;
    }
    for (const auto& [r, a] : cols_[static_cast<std::size_t>(j)])
        for (int i = 0; i < m_; ++i)
            out[static_cast<std::size_t>(i)] += a * binv_[static_cast<std::size_t>(i) * m_ + r];
}

double SimplexSolver::row_dot_column(const std::vector<double>& row, int j) const {
    if (j >= n_) return -row[static_cast<std::size_t>(j - n_)];
    double s = 0.0;
    for (const auto& [r, a] : cols_[static_cast<std::size_t>(j)])
        s += a * row[static_cast<std::size_t>(r)];
    return s;
}

void SimplexSolver::compute_duals(const std::vector<double>& cb, std::vector<double>& y) const {
    y.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
        const double c = cb[static_cast<std::size_t>(i)];
        if (c == 0.0) continue;
        const double* row = &binv_[static_cast<std::size_t>(i) * m_];
        for (int r = 0; r < m_; ++r) y[static_cast<std::size_t>(r)] += c * row[r];
    }
}

void SimplexSolver::reset_to_slack_basis() {
    basic_.resize(static_cast<std::size_t>(m_));
    state_.assign(static_cast<std::size_t>(n_ + m_), kAtLower);
    for (int j = 0; j < n_ + m_; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (std::isfinite(lb_[ju]))
            state_[ju] = kAtLower;
        else if (std::isfinite(ub_[ju]))
            state_[ju] = kAtUpper;
        else
            state_[ju] = kFreeZero;
    }
    for (int r = 0; r < m_; ++r) {
        basic_[static_cast<std::size_t>(r)] = static_cast<std::int32_t>(n_ + r);
        state_[static_cast<std::size_t>(n_ + r)] = kBasic;
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_[static_cast<std::size_t>(r) * m_ + r] = -1.0;
    factorized_ = true;
    recompute_xb();
}

bool SimplexSolver::refactor() {
    // Invert the basis matrix by Gauss-Jordan with partial pivoting.
    std::vector<double> b(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int p = 0; p < m_; ++p) {
        const int j = basic_[static_cast<std::size_t>(p)];
        if (j >= n_) {
            b[static_cast<std::size_t>(j - n_) * m_ + p] = -1.0;
        } else {
            for (const auto& [r, a] : cols_[static_cast<std::size_t>(j)])
                b[static_cast<std::size_t>(r) * m_ + p] = a;
        }
    }
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) inv[static_cast<std::size_t>(r) * m_ + r] = 1.0;
    for (int c = 0; c < m_; ++c) {
        int piv = -1;
        double best = 1e-11;
        for (int r = c; r < m_; ++r) {
            const double v = std::fabs(b[static_cast<std::size_t>(r) * m_ + c]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (piv < 0) {
            factorized_ = false;
            return false;  // singular basis
        }
        if (piv != c) {
            for (int k = 0; k < m_; ++k) {
                std::swap(b[static_cast<std::size_t>(piv) * m_ + k],
                          b[static_cast<std::size_t>(c) * m_ + k]);
                std::swap(inv[static_cast<std::size_t>(piv) * m_ + k],
                          inv[static_cast<std::size_t>(c) * m_ + k]);
            }
        }
        const double d = 1.0 / b[static_cast<std::size_t>(c) * m_ + c];
        for (int k = 0; k < m_; ++k) {
            b[static_cast<std::size_t>(c) * m_ + k] *= d;
            inv[static_cast<std::size_t>(c) * m_ + k] *= d;
        }
        for (int r = 0; r < m_; ++r) {
            if (r == c) continue;
            const double f = b[static_cast<std::size_t>(r) * m_ + c];
            if (f == 0.0) continue;
            for (int k = 0; k < m_; ++k) {
                b[static_cast<std::size_t>(r) * m_ + k] -= f * b[static_cast<std::size_t>(c) * m_ + k];
                inv[static_cast<std::size_t>(r) * m_ + k] -=
                    f * inv[static_cast<std::size_t>(c) * m_ + k];
            }
        }
    }
    binv_ = std::move(inv);
    factorized_ = true;
    recompute_xb();
    return true;
}

void SimplexSolver::recompute_xb() {
    // x_B = B^-1 (0 - N x_N)
    std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == kBasic) continue;
        const double v = nonbasic_value(j);
        if (v == 0.0) continue;
        if (j >= n_)
            rhs[static_cast<std::size_t>(j - n_)] += v;  // -(-1)*v
        else
            for (const auto& [r, a] : cols_[static_cast<std::size_t>(j)])
                rhs[static_cast<std::size_t>(r)] -= a * v;
    }
    xb_.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
        const double* row = &binv_[static_cast<std::size_t>(i) * m_];
        double s = 0.0;
        for (int r = 0; r < m_; ++r) s += row[r] * rhs[static_cast<std::size_t>(r)];
        xb_[static_cast<std::size_t>(i)] = s;
    }
}

void SimplexSolver::pivot(int row, int col, const std::vector<double>& w) {
    // B^-1 <- E B^-1 with eta column derived from w = B^-1 A_col.
    const double wr = w[static_cast<std::size_t>(row)];
    double* prow = &binv_[static_cast<std::size_t>(row) * m_];
    const double inv_wr = 1.0 / wr;
    for (int k = 0; k < m_; ++k) prow[k] *= inv_wr;
    for (int i = 0; i < m_; ++i) {
        if (i == row) continue;
        const double f = w[static_cast<std::size_t>(i)];
        if (f == 0.0) continue;
        double* irow = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
    }
    basic_[static_cast<std::size_t>(row)] = static_cast<std::int32_t>(col);
    state_[static_cast<std::size_t>(col)] = kBasic;
}

LpResult SimplexSolver::primal_loop(long max_iters) {
    LpResult res;
    long since_refactor = 0;
    long degenerate_run = 0;
    bool bland = false;

    std::vector<double> cb(static_cast<std::size_t>(m_));
    std::vector<double> y, w;

    for (long iter = 0; iter < max_iters; ++iter) {
        ++res.iterations;
        ++iterations_;

        // Phase-1 costs where the basis is infeasible, true costs otherwise.
        bool infeasible = false;
        for (int i = 0; i < m_; ++i) {
            const auto ju = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
            const double x = xb_[static_cast<std::size_t>(i)];
            double c = 0.0;
            if (x < lb_[ju] - feas_tol(lb_[ju])) {
                c = -1.0;
                infeasible = true;
            } else if (x > ub_[ju] + feas_tol(ub_[ju])) {
                c = 1.0;
                infeasible = true;
            } else if (!infeasible) {
                c = cost_[ju];
            }
            cb[static_cast<std::size_t>(i)] = c;
        }
        if (infeasible) {
            // Pure phase-1 costs: zero out the feasible entries.
            for (int i = 0; i < m_; ++i) {
                const auto ju = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
                const double x = xb_[static_cast<std::size_t>(i)];
                if (x >= lb_[ju] - feas_tol(lb_[ju]) && x <= ub_[ju] + feas_tol(ub_[ju]))
                    cb[static_cast<std::size_t>(i)] = 0.0;
            }
        }

        compute_duals(cb, y);

        // Pricing.
        int enter = -1;
        double enter_merit = kDualTol;
        int enter_dir = 0;
        for (int j = 0; j < n_ + m_; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const auto st = state_[ju];
            if (st == kBasic) continue;
            if (lb_[ju] == ub_[ju]) continue;  // fixed
            const double cj = infeasible ? 0.0 : cost_[ju];
            const double d = cj - row_dot_column(y, j);
            int dir = 0;
            if (st == kAtLower && d < -kDualTol)
                dir = +1;
            else if (st == kAtUpper && d > kDualTol)
                dir = -1;
            else if (st == kFreeZero && std::fabs(d) > kDualTol)
                dir = d < 0.0 ? +1 : -1;
            if (dir == 0) continue;
            if (bland) {
                enter = j;
                enter_dir = dir;
                break;
            }
            if (std::fabs(d) > enter_merit) {
                enter_merit = std::fabs(d);
                enter = j;
                enter_dir = dir;
            }
        }
        if (enter < 0) {
            if (infeasible) {
                res.status = LpStatus::infeasible;
                return res;
            }
            res.status = LpStatus::optimal;
            return res;
        }

        column_times(enter, w);

        // Ratio test; x_B[i] moves at rate -dir*w_i per unit of t.
        const auto eu = static_cast<std::size_t>(enter);
        double t_max = kInf;
        int block_row = -1;   // -1: entering's own bound flip
        int block_side = 0;   // -1: lands at lower, +1: lands at upper
        if (std::isfinite(lb_[eu]) && std::isfinite(ub_[eu])) t_max = ub_[eu] - lb_[eu];
        for (int i = 0; i < m_; ++i) {
            const double rate = -enter_dir * w[static_cast<std::size_t>(i)];
            if (std::fabs(rate) < kPivotTol) continue;
            const auto ju = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
            const double x = xb_[static_cast<std::size_t>(i)];
            const double lo = lb_[ju], up = ub_[ju];
            double t = kInf;
            int side = 0;
            if (x < lo - feas_tol(lo)) {
                // Infeasible below: blocks only while rising to its lower bound.
                if (rate > 0.0) {
                    t = (lo - x) / rate;
                    side = -1;
                }
            } else if (x > up + feas_tol(up)) {
                if (rate < 0.0) {
                    t = (up - x) / rate;
                    side = +1;
                }
            } else if (rate > 0.0 && std::isfinite(up)) {
                t = (up - x) / rate;
                side = +1;
            } else if (rate < 0.0 && std::isfinite(lo)) {
                t = (lo - x) / rate;
                side = -1;
            }
            if (side == 0) continue;
            t = std::max(t, 0.0);
            if (t < t_max - 1e-12 ||
                (t < t_max + 1e-12 && block_row >= 0 &&
                 std::fabs(w[static_cast<std::size_t>(i)]) >
                     std::fabs(w[static_cast<std::size_t>(block_row)]))) {
                t_max = t;
                block_row = i;
                block_side = side;
            }
        }

        if (!std::isfinite(t_max)) {
            res.status = infeasible ? LpStatus::iteration_limit : LpStatus::unbounded;
            return res;
        }

        degenerate_run = t_max < 1e-10 ? degenerate_run + 1 : 0;
        if (degenerate_run > 2L * (m_ + n_)) bland = true;
        if (degenerate_run == 0) bland = false;

        if (block_row < 0) {
            // Bound flip of the entering variable.
            for (int i = 0; i < m_; ++i)
                xb_[static_cast<std::size_t>(i)] -=
                    enter_dir * t_max * w[static_cast<std::size_t>(i)];
            state_[eu] = state_[eu] == kAtLower ? kAtUpper : kAtLower;
            continue;
        }

        if (std::fabs(w[static_cast<std::size_t>(block_row)]) < kPivotTol) {
            if (!refactor()) {
                reset_to_slack_basis();
                if (!refactor()) throw std::runtime_error("simplex: singular slack basis");
            }
            continue;
        }

        const double enter_value = nonbasic_value(enter) + enter_dir * t_max;
        const int leave = basic_[static_cast<std::size_t>(block_row)];
        for (int i = 0; i < m_; ++i)
            xb_[static_cast<std::size_t>(i)] -= enter_dir * t_max * w[static_cast<std::size_t>(i)];
        pivot(block_row, enter, w);
        xb_[static_cast<std::size_t>(block_row)] = enter_value;
        state_[static_cast<std::size_t>(leave)] = block_side < 0 ? kAtLower : kAtUpper;

        if (++since_refactor >= kRefactorInterval) {
            since_refactor = 0;
            if (!refactor()) {
                reset_to_slack_basis();
                refactor();
            }
        }
    }
    res.status = LpStatus::iteration_limit;
    return res;
}

LpResult SimplexSolver::dual_loop(long max_iters) {
    LpResult res;
    long since_refactor = 0;
    std::vector<double> cb(static_cast<std::size_t>(m_));
    std::vector<double> y, w, rho;

    for (long iter = 0; iter < max_iters; ++iter) {
        ++res.iterations;
        ++iterations_;

        // Most-violated basic leaves.
        int row = -1;
        double worst = 0.0;
        int target_side = 0;
        for (int i = 0; i < m_; ++i) {
            const auto ju = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
            const double x = xb_[static_cast<std::size_t>(i)];
            const double below = lb_[ju] - x;
            const double above = x - ub_[ju];
            if (below > feas_tol(lb_[ju]) && below > worst) {
                worst = below;
                row = i;
                target_side = -1;
            }
            if (above > feas_tol(ub_[ju]) && above > worst) {
                worst = above;
                row = i;
                target_side = +1;
            }
        }
        if (row < 0) {
            res.status = LpStatus::optimal;
            return res;
        }

        // rho = e_row B^-1; alpha_j = rho' A_j.
        rho.assign(static_cast<std::size_t>(m_), 0.0);
        const double* prow = &binv_[static_cast<std::size_t>(row) * m_];
        for (int r = 0; r < m_; ++r) rho[static_cast<std::size_t>(r)] = prow[r];

        for (int i = 0; i < m_; ++i)
            cb[static_cast<std::size_t>(i)] =
                cost_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])];
        compute_duals(cb, y);

        int enter = -1;
        double best_ratio = kInf;
        double best_alpha = 0.0;
        for (int j = 0; j < n_ + m_; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const auto st = state_[ju];
            if (st == kBasic) continue;
            if (lb_[ju] == ub_[ju]) continue;
            const double alpha = row_dot_column(rho, j);
            if (std::fabs(alpha) < kPivotTol) continue;
            bool ok;
            if (target_side < 0) {
                // x_row must increase: delta x_row = -alpha * delta x_j.
                ok = (st == kAtLower && alpha < 0.0) || (st == kAtUpper && alpha > 0.0) ||
                     st == kFreeZero;
            } else {
                ok = (st == kAtLower && alpha > 0.0) || (st == kAtUpper && alpha < 0.0) ||
                     st == kFreeZero;
            }
            if (!ok) continue;
            const double d = cost_[ju] - row_dot_column(y, j);
            const double ratio = std::fabs(d) / std::fabs(alpha);
            if (ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 && std::fabs(alpha) > std::fabs(best_alpha))) {
                best_ratio = ratio;
                best_alpha = alpha;
                enter = j;
            }
        }
        if (enter < 0) {
            res.status = LpStatus::infeasible;
            return res;
        }

        column_times(enter, w);
        const double alpha = w[static_cast<std::size_t>(row)];
        if (std::fabs(alpha) < kPivotTol) {
            if (!refactor()) {
                res.status = LpStatus::iteration_limit;
                return res;
            }
            continue;
        }

        const auto leave_ju = static_cast<std::size_t>(basic_[static_cast<std::size_t>(row)]);
        const double target = target_side < 0 ? lb_[leave_ju] : ub_[leave_ju];
        const double delta = (xb_[static_cast<std::size_t>(row)] - target) / alpha;
        for (int i = 0; i < m_; ++i)
            xb_[static_cast<std::size_t>(i)] -= delta * w[static_cast<std::size_t>(i)];
        const double enter_value = nonbasic_value(enter) + delta;
        const int leave = basic_[static_cast<std::size_t>(row)];
        pivot(row, enter, w);
        xb_[static_cast<std::size_t>(row)] = enter_value;
        state_[static_cast<std::size_t>(leave)] = target_side < 0 ? kAtLower : kAtUpper;

        if (++since_refactor >= kRefactorInterval) {
            since_refactor = 0;
            if (!refactor()) {
                res.status = LpStatus::iteration_limit;
                return res;
            }
        }
    }
    res.status = LpStatus::iteration_limit;
    return res;
}

LpResult SimplexSolver::solve_from_scratch() {
    reset_to_slack_basis();
    LpResult res = primal_loop(200000L + 200L * (m_ + n_));
    if (res.status == LpStatus::optimal) {
        refactor();  // polish values
        res.objective = objective_value();
    }
    return res;
}

LpResult SimplexSolver::resolve() {
    if (basic_.empty()) return solve_from_scratch();
    if (factorized_)
        recompute_xb();  // bounds may have moved the nonbasic values
    else if (!refactor())
        return solve_from_scratch();
    LpResult res = dual_loop(20000L + 50L * (m_ + n_));
    if (res.status == LpStatus::optimal) {
        // Tolerance drift can leave a primal-improving column; finish with
        // the primal loop (usually zero iterations).
        LpResult cleanup = primal_loop(10000);
        cleanup.iterations += res.iterations;
        res = cleanup;
        if (res.status == LpStatus::optimal) {
            refactor();
            res.objective = objective_value();
        }
        return res;
    }
    if (res.status == LpStatus::infeasible) return res;
    // Warm start failed; fall back.
    LpResult cold = solve_from_scratch();
    cold.iterations += res.iterations;
    return cold;
}

SimplexSolver::Basis SimplexSolver::save_basis() const { return {basic_, state_}; }

void SimplexSolver::load_basis(const Basis& basis) {
    if (factorized_ && basic_ == basis.basic) {
        state_ = basis.state;  // the factorization only depends on basic_
        return;
    }
    basic_ = basis.basic;
    state_ = basis.state;
    factorized_ = false;
}

std::vector<double> SimplexSolver::primal_values() const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
        if (state_[static_cast<std::size_t>(j)] != kBasic) x[static_cast<std::size_t>(j)] = nonbasic_value(j);
    for (int i = 0; i < m_; ++i) {
        const int j = basic_[static_cast<std::size_t>(i)];
        if (j < n_) x[static_cast<std::size_t>(j)] = xb_[static_cast<std::size_t>(i)];
    }
    return x;
}

double SimplexSolver::objective_value() const {
    double v = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (cost_[ju] == 0.0) continue;
        if (state_[ju] != kBasic) v += cost_[ju] * nonbasic_value(j);
    }
    for (int i = 0; i < m_; ++i)
        v += cost_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] *
             xb_[static_cast<std::size_t>(i)];
    return v;
}

}  // namespace stodyn::milp
