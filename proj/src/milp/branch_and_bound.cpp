#include "stodyn/milp/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include "stodyn/milp/simplex.hpp"

namespace stodyn::milp {

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
    double bound = -kInf;  // parent LP value (minimize sense)
    long id = 0;
    // Bound overrides relative to the root problem, applied on activation.
    std::vector<std::pair<int, std::pair<double, double>>> changes;
    SimplexSolver::Basis basis;
};

struct NodeOrder {
    bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
        if (a->bound != b->bound) return a->bound > b->bound;  // min-heap on bound
        return a->id > b->id;
    }
};

int pick_branch_variable(const Problem& problem, const std::vector<double>& x, double tol) {
    int best = -1;
    double best_frac = tol;
    for (int j = 0; j < problem.num_variables(); ++j) {
        if (!problem.is_integer()[static_cast<std::size_t>(j)]) continue;
        const double v = x[static_cast<std::size_t>(j)];
        const double frac = std::fabs(v - std::round(v));
        if (frac > best_frac) {
            best_frac = frac;
            best = j;
        }
    }
    return best;
}

}  // namespace

Solution branch_and_bound(const Problem& problem, const SolverConfig& config) {
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
    const double sense_sign = problem.sense == Sense::maximize ? -1.0 : 1.0;

    Solution out;
    SimplexSolver lp(problem);

    // All bookkeeping in minimize sense, objective constant excluded.
    double incumbent = kInf;
    std::vector<double> incumbent_values;
    long nodes = 0;
    long next_id = 1;

    auto accept_if_incumbent = [&](double objective) {
        std::vector<double> x = lp.primal_values();
        if (problem.max_integer_violation(x) > config.integrality_tol) return false;
        if (objective >= incumbent) return false;
        // Prefer exactly rounded integers; keep the raw LP point when rounding
        // upsets a big-M row beyond tolerance.
        std::vector<double> rounded = x;
        for (int j = 0; j < problem.num_variables(); ++j)
            if (problem.is_integer()[static_cast<std::size_t>(j)])
                rounded[static_cast<std::size_t>(j)] =
                    std::round(rounded[static_cast<std::size_t>(j)]);
        if (problem.max_violation(rounded) <= 1e-6)
            x = std::move(rounded);
        else if (problem.max_violation(x) > 1e-6)
            return false;
        incumbent = objective;
        incumbent_values = std::move(x);
        return true;
    };

    auto gap_closed = [&](double bound) {
        if (incumbent >= kInf) return false;
        return bound >= incumbent - config.relative_gap * std::max(1.0, std::fabs(incumbent));
    };

    std::vector<int> heuristic_vars = config.heuristic_priority;
    if (heuristic_vars.empty())
        for (int k = 0; k < problem.num_variables(); ++k)
            if (problem.is_integer()[static_cast<std::size_t>(k)]) heuristic_vars.push_back(k);

    // Active bound overrides currently applied to `lp`.
    std::vector<std::pair<int, std::pair<double, double>>> active;
    auto reset_active = [&] {
        for (const auto& [j, b] : active)
            lp.set_bounds(j, problem.lower()[static_cast<std::size_t>(j)],
                          problem.upper()[static_cast<std::size_t>(j)]);
        active.clear();
    };

    // Fix every integer variable at its rounded LP value and re-solve what
    // remains; an integral, feasible result becomes the incumbent.
    auto rounding_heuristic = [&](const std::vector<double>& x) {
        std::vector<std::pair<int, std::pair<double, double>>> saved;
        bool ok = true;
        for (int j : heuristic_vars) {
            const auto ju = static_cast<std::size_t>(j);
            double lo = problem.lower()[ju], hi = problem.upper()[ju];
            for (const auto& [k, b] : active)
                if (k == j) {
                    lo = b.first;
                    hi = b.second;
                }
            const double v = std::round(x[ju]);
            if (v < lo - 0.5 || v > hi + 0.5) {
                ok = false;
                break;
            }
            saved.push_back({j, {lo, hi}});
            lp.set_bounds(j, std::max(lo, v), std::min(hi, v));
        }
        if (ok) {
            LpResult r = lp.resolve();
            out.lp_iterations += r.iterations;
            if (r.status == LpStatus::optimal) accept_if_incumbent(lp.objective_value());
        }
        for (const auto& [k, b] : saved) lp.set_bounds(k, b.first, b.second);
    };

    // Root relaxation.
    LpResult root = lp.solve_from_scratch();
    out.lp_iterations += root.iterations;
    if (root.status != LpStatus::optimal) {
        out.status = root.status == LpStatus::infeasible
                         ? Status::infeasible
                         : (root.status == LpStatus::unbounded ? Status::unbounded : Status::limit);
        out.wall_seconds = elapsed();
        return out;
    }

    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> open;
    auto root_node = std::make_shared<Node>();
    root_node->bound = lp.objective_value();
    root_node->basis = lp.save_basis();
    open.push(root_node);

    bool hit_limit = false;
    double best_open_bound = root_node->bound;
    std::shared_ptr<Node> current;  // depth-first dive in progress

    while (current || !open.empty()) {
        if (elapsed() > config.time_limit_seconds || nodes > config.node_limit) {
            hit_limit = true;
            break;
        }
        std::shared_ptr<Node> node;
        if (current) {
            node = std::move(current);
            current.reset();
            if (gap_closed(node->bound)) continue;
        } else {
            node = open.top();
            open.pop();
            best_open_bound = node->bound;
            if (gap_closed(node->bound)) {
                // Everything left is within the proven gap.
                best_open_bound = incumbent;
                open = {};
                break;
            }
            reset_active();
            active = node->changes;
            for (const auto& [j, b] : active) lp.set_bounds(j, b.first, b.second);
            lp.load_basis(node->basis);
        }

        ++nodes;
        LpResult r = lp.resolve();
        out.lp_iterations += r.iterations;
        if (r.status == LpStatus::infeasible) continue;
        if (r.status != LpStatus::optimal) {
            hit_limit = true;
            break;
        }
        const double bound = lp.objective_value();
        if (gap_closed(bound)) continue;

        const std::vector<double> x = lp.primal_values();
        const int branch_var = pick_branch_variable(problem, x, config.integrality_tol);
        if (branch_var < 0) {
            accept_if_incumbent(bound);
            continue;
        }

        if (config.enable_rounding_heuristic && nodes == 1) {
            SimplexSolver::Basis here = lp.save_basis();
            rounding_heuristic(x);
            lp.load_basis(here);
        }

        const auto ju = static_cast<std::size_t>(branch_var);
        const double v = x[ju];
        const SimplexSolver::Basis basis = lp.save_basis();

        // Dive on the nearer side; queue the other.
        const bool dive_up = v - std::floor(v) >= 0.5;
        auto down = std::make_shared<Node>();
        down->bound = bound;
        down->id = next_id++;
        down->changes = active;
        down->changes.push_back({branch_var, {problem.lower()[ju], std::floor(v)}});
        down->basis = basis;
        auto up = std::make_shared<Node>();
        up->bound = bound;
        up->id = next_id++;
        up->changes = active;
        up->changes.push_back({branch_var, {std::ceil(v), problem.upper()[ju]}});
        up->basis = basis;

        current = dive_up ? up : down;
        open.push(dive_up ? down : up);
        // Apply the dive child's single extra change in place; the factorized
        // basis carries over untouched.
        const auto& change = current->changes.back();
        active.push_back(change);
        lp.set_bounds(change.first, change.second.first, change.second.second);
    }

    reset_active();
    out.nodes = nodes;
    out.wall_seconds = elapsed();

    double proven;
    if (current)
        proven = std::min(current->bound, open.empty() ? current->bound : open.top()->bound);
    else if (!open.empty())
        proven = open.top()->bound;
    else
        proven = incumbent < kInf ? incumbent : best_open_bound;
    proven = std::min(proven, incumbent);

    if (incumbent < kInf) {
        out.values = incumbent_values;
        out.objective = sense_sign * incumbent + problem.objective_constant;
        out.best_bound = sense_sign * proven + problem.objective_constant;
        out.status = hit_limit && !gap_closed(proven) ? Status::limit : Status::optimal;
    } else if (hit_limit) {
        out.status = Status::limit;
        out.best_bound = sense_sign * proven + problem.objective_constant;
    } else {
        out.status = Status::infeasible;
    }
    return out;
}

}  // namespace stodyn::milp
