#include "stodyn/models/builders.hpp"

#include <cmath>
#include <string>

#include "stodyn/errors.hpp"

namespace stodyn::models {

using milp::kInf;

namespace {

std::string sub(const char* base, int t) { return std::string(base) + "_" + std::to_string(t); }
std::string sub2(const char* base, int j, int t) {
    return std::string(base) + "_" + std::to_string(j) + "_" + std::to_string(t);
}

// Shared builder state: period data, big-M values, the delta/P machinery and
// the piecewise floors. The per-measure entry points compose these blocks
// following the variant matrix.
struct Builder {
    const LotSizingInstance& inst;
    const LinearizationSet& lins;
    ModelVariant variant;
    BuildOptions opts;
    MilpModel model;
    int n;
    bool lost_sales;
    bool e_shifted;  // rows carry the +e_W^{jt} shift (Edmundson-Madanski side)

    Builder(const LotSizingInstance& i, const LinearizationSet& l, const ModelVariant& v,
            const BuildOptions& o)
        : inst(i), lins(l), variant(v), opts(o), n(i.horizon()) {
        variant.validate();
        inst.validate(variant.shortage);
        if (lins.horizon() != n) throw ConfigError("linearization set horizon mismatch");
        lost_sales = variant.shortage == Shortage::lost_sales;
        e_shifted = lost_sales ? variant.direction == Direction::lower_bound
                               : variant.direction == Direction::upper_bound;
        model.variant = variant;
        model.horizon = n;
        model.period_mean.resize(static_cast<std::size_t>(n));
        model.big_m.resize(static_cast<std::size_t>(n));
        // An order at t may cover demand through the end of the horizon, so
        // the deactivating constant must span all periods, not just 1..t.
        double horizon_q = std::fabs(inst.initial_inventory);
        for (int t = 1; t <= n; ++t) {
            model.period_mean[static_cast<std::size_t>(t - 1)] = inst.demand.period(t).mean();
            const auto& d = inst.demand.period(t);
            horizon_q += d.variance() == 0.0 ? d.mean() : d.quantile(0.9999);
        }
        for (int t = 1; t <= n; ++t) model.big_m[static_cast<std::size_t>(t - 1)] = horizon_q;
    }

    double dbar(int t) const { return model.period_mean[static_cast<std::size_t>(t - 1)]; }
    double dbar_range(int j, int t) const { return lins.at(j, t).source_mean; }
    double big_m(int t) const { return model.big_m[static_cast<std::size_t>(t - 1)]; }
    double total_mean() const {
        double s = 0.0;
        for (int t = 1; t <= n; ++t) s += dbar(t);
        return s;
    }

    void add_core_variables(bool with_bneg, bool with_cend) {
        auto& p = model.problem;
        const double a = inst.fixed_order_cost;
        const double v = inst.unit_cost;
        const double h = inst.holding_cost;
        const double s = inst.selling_price;

        if (lost_sales) {
            p.sense = milp::Sense::maximize;
            p.objective_constant = s * inst.initial_inventory;
        } else {
            p.sense = milp::Sense::minimize;
            p.objective_constant = -v * inst.initial_inventory + v * total_mean();
        }

        for (int t = 1; t <= n; ++t)
            model.delta.push_back(
                p.add_variable(sub("delta", t), 0, 1, lost_sales ? -a : a, true));
        for (int t = 1; t <= n; ++t)
            model.ihat.push_back(p.add_variable(
                sub("Ihat", t), -kInf, kInf, (!lost_sales && t == n) ? v : 0.0, false));
        for (int t = 1; t <= n; ++t) {
            double coef = lost_sales ? -h : h;
            if (lost_sales && t == n) coef -= s;  // end-of-horizon stock is not sold
            model.ipos.push_back(p.add_variable(sub("Ipos", t), 0, kInf, coef, false));
        }
        if (with_bneg) {
            const double b = (variant.measure == Measure::penalty &&
                              variant.penalty_basis == PenaltyBasis::per_period)
                                 ? inst.penalty_cost
                                 : 0.0;
            for (int t = 1; t <= n; ++t)
                model.bneg.push_back(
                    p.add_variable(sub("B", t), 0, kInf, lost_sales ? -b : b, false));
        }
        if (with_cend) {
            const double b = variant.penalty_basis == PenaltyBasis::per_unit_short
                                 ? inst.penalty_cost
                                 : 0.0;
            for (int t = 1; t <= n; ++t)
                model.cend.push_back(
                    p.add_variable(sub("C", t), 0, kInf, lost_sales ? -b : b, false));
        }
        if (lost_sales) {
            const double m = inst.margin();
            for (int t = 1; t <= n; ++t)
                model.qty.push_back(p.add_variable(sub("Q", t), 0, big_m(t), m, false));
        }
        model.pvar.resize(static_cast<std::size_t>(n));
        for (int t = 1; t <= n; ++t)
            for (int j = 1; j <= t; ++j)
                model.pvar[static_cast<std::size_t>(t - 1)].push_back(
                    p.add_variable(sub2("P", j, t), 0, 1, 0.0, true));
    }

    // Expected-value conservation and (backorder) the delta-gated reordering
    // condition; equality holds in no-order periods through the pair.
    void add_inventory_rows() {
        auto& p = model.problem;
        for (int t = 1; t <= n; ++t) {
            std::vector<int> idx{model.var_ihat(t)};
            std::vector<double> coef{1.0};
            double rhs = -dbar(t);
            if (t == 1)
                rhs += inst.initial_inventory;
            else {
                idx.push_back(model.var_ihat(t - 1));
                coef.push_back(-1.0);
            }
            p.add_row(sub("balance", t), rhs, kInf, idx, coef);

            if (!lost_sales) {
                std::vector<int> ridx = idx;
                std::vector<double> rcoef = coef;
                ridx.push_back(model.var_delta(t));
                rcoef.push_back(-big_m(t));
                p.add_row(sub("reorder", t), -kInf, rhs, ridx, rcoef);
            }
        }
    }

    // Order-quantity linking under lost sales. The order tops up the on-hand
    // part of the closing inventory of t-1, not the net position.
    void add_lost_sales_linking() {
        auto& p = model.problem;
        const double c0 = std::max(inst.initial_inventory, 0.0);
        for (int t = 1; t <= n; ++t) {
            const double m = big_m(t);
            const int q = model.qty[static_cast<std::size_t>(t - 1)];
            std::vector<int> idx{q, model.var_ihat(t), model.var_delta(t)};
            std::vector<double> lo_coef{1.0, -1.0, -m};
            std::vector<double> hi_coef{1.0, -1.0, +m};
            double rhs_lo = dbar(t) - m;
            double rhs_hi = dbar(t) + m;
            if (t == 1) {
                rhs_lo -= c0;
                rhs_hi -= c0;
            } else {
                idx.push_back(model.ipos[static_cast<std::size_t>(t - 2)]);
                lo_coef.push_back(1.0);
                hi_coef.push_back(1.0);
            }
            p.add_row(sub("qty_lo", t), rhs_lo, kInf, idx, lo_coef);
            p.add_row(sub("qty_hi", t), -kInf, rhs_hi, idx, hi_coef);

            p.add_row(sub("qty_delta", t), -kInf, 0.0, {q, model.var_delta(t)}, {1.0, -m});

            // Inventory jumps only with a positive order.
            std::vector<int> jidx{model.var_ihat(t)};
            std::vector<double> jcoef{1.0};
            double jrhs = -dbar(t);
            if (t == 1)
                jrhs += inst.initial_inventory;
            else {
                jidx.push_back(model.var_ihat(t - 1));
                jcoef.push_back(-1.0);
            }
            jidx.push_back(opts.tighten_lost_sales_linking ? model.var_delta(t) : q);
            jcoef.push_back(-m);
            p.add_row(sub("jump", t), -kInf, jrhs, jidx, jcoef);
        }
    }

    void add_p_machinery() {
        auto& p = model.problem;
        for (int t = 1; t <= n; ++t) {
            std::vector<int> idx;
            std::vector<double> coef;
            for (int j = 1; j <= t; ++j) {
                idx.push_back(model.var_p(j, t));
                coef.push_back(1.0);
            }
            p.add_row(sub("one_cycle", t), 1.0, 1.0, idx, coef);

            for (int j = 1; j <= t; ++j) {
                std::vector<int> sidx{model.var_p(j, t), model.var_delta(j)};
                std::vector<double> scoef{1.0, -1.0};
                for (int k = j + 1; k <= t; ++k) {
                    sidx.push_back(model.var_delta(k));
                    scoef.push_back(1.0);
                }
                p.add_row(sub2("cycle_link", j, t), 0.0, kInf, sidx, scoef);
            }

            // With no review in 1..t the opening cycle runs from period 1 on
            // the initial inventory; pin P_1t so the model cannot pick a
            // shorter convolution there.
            std::vector<int> cidx{model.var_p(1, t)};
            std::vector<double> ccoef{1.0};
            for (int k = 1; k <= t; ++k) {
                cidx.push_back(model.var_delta(k));
                ccoef.push_back(1.0);
            }
            p.add_row(sub("cover", t), 1.0, kInf, cidx, ccoef);
        }
    }

    void add_alpha_rows() {
        auto& p = model.problem;
        const double alpha = inst.service_level;
        for (int t = 1; t <= n; ++t) {
            std::vector<int> idx{model.var_ihat(t)};
            std::vector<double> coef{1.0};
            for (int j = 1; j <= t; ++j) {
                const double q = lins.quantile(j, t, alpha);
                idx.push_back(model.var_p(j, t));
                coef.push_back(-(q - dbar_range(j, t)));
            }
            p.add_row(sub("alpha", t), 0.0, kInf, idx, coef);
        }
    }

    // Ipos_t >= (Ihat_t + sum_j dbar_jt P_jt) cum_i
    //           - sum_j (cum_i dbar_jt - S_i^{jt} [- e^{jt}]) P_jt,
    // one row per (t, i), plus the e floor on the shifted side.
    void add_ipos_piecewise() {
        auto& p = model.problem;
        const int w = lins.regions();
        const auto& cum = lins.partition().cumulative();
        for (int t = 1; t <= n; ++t) {
            for (int i = 1; i <= w; ++i) {
                const double ci = cum[static_cast<std::size_t>(i - 1)];
                std::vector<int> idx{model.ipos[static_cast<std::size_t>(t - 1)],
                                     model.var_ihat(t)};
                std::vector<double> coef{1.0, -ci};
                for (int j = 1; j <= t; ++j) {
                    const auto& lin = lins.at(j, t);
                    const double s_i =
                        lin.cumulative_mean_terms()[static_cast<std::size_t>(i - 1)];
                    double c = -(ci * dbar_range(j, t) - s_i);
                    if (e_shifted) c -= lin.max_error;
                    idx.push_back(model.var_p(j, t));
                    coef.push_back(c);
                }
                p.add_row(sub2("ipos_pw", t, i), 0.0, kInf, idx, coef);
            }
            if (e_shifted) {
                std::vector<int> idx{model.ipos[static_cast<std::size_t>(t - 1)]};
                std::vector<double> coef{1.0};
                for (int j = 1; j <= t; ++j) {
                    idx.push_back(model.var_p(j, t));
                    coef.push_back(-lins.at(j, t).max_error);
                }
                p.add_row(sub("ipos_floor", t), 0.0, kInf, idx, coef);
            }
        }
    }

    // B_t >= -Ihat_t + [Ipos right-hand side]: the loss-function family via
    // the loss/complementary-loss identity.
    void add_bneg_piecewise() {
        auto& p = model.problem;
        const int w = lins.regions();
        const auto& cum = lins.partition().cumulative();
        for (int t = 1; t <= n; ++t) {
            const int b = model.bneg[static_cast<std::size_t>(t - 1)];
            for (int i = 1; i <= w; ++i) {
                const double ci = cum[static_cast<std::size_t>(i - 1)];
                std::vector<int> idx{b, model.var_ihat(t)};
                std::vector<double> coef{1.0, 1.0 - ci};
                for (int j = 1; j <= t; ++j) {
                    const auto& lin = lins.at(j, t);
                    const double s_i =
                        lin.cumulative_mean_terms()[static_cast<std::size_t>(i - 1)];
                    double c = -(ci * dbar_range(j, t) - s_i);
                    if (e_shifted) c -= lin.max_error;
                    idx.push_back(model.var_p(j, t));
                    coef.push_back(c);
                }
                p.add_row(sub2("bneg_pw", t, i), 0.0, kInf, idx, coef);
            }
            // Segment 0: B_t >= -Ihat_t (+ sum_j e P_jt on the shifted side).
            std::vector<int> idx{b, model.var_ihat(t)};
            std::vector<double> coef{1.0, 1.0};
            if (e_shifted)
                for (int j = 1; j <= t; ++j) {
                    idx.push_back(model.var_p(j, t));
                    coef.push_back(-lins.at(j, t).max_error);
                }
            p.add_row(sub("bneg_floor", t), 0.0, kInf, idx, coef);
        }
    }

    // Per-period cap tied to the active cycle: B_t <= (1-beta) sum_j P_jt d_jt.
    void add_beta_cyc_rows() {
        auto& p = model.problem;
        const double slack = 1.0 - inst.service_level;
        for (int t = 1; t <= n; ++t) {
            std::vector<int> idx{model.bneg[static_cast<std::size_t>(t - 1)]};
            std::vector<double> coef{1.0};
            for (int j = 1; j <= t; ++j) {
                idx.push_back(model.var_p(j, t));
                coef.push_back(-slack * dbar_range(j, t));
            }
            p.add_row(sub("fill_rate", t), -kInf, 0.0, idx, coef);
        }
    }

    // Cycle-end extraction: C_t >= B_t - (1-delta_{t+1}) Mc_t, C_N = B_N.
    void add_cycle_end_rows() {
        auto& p = model.problem;
        for (int t = 1; t <= n; ++t) {
            const int c = model.cend[static_cast<std::size_t>(t - 1)];
            const int b = model.bneg[static_cast<std::size_t>(t - 1)];
            if (t == n) {
                p.add_row(sub("cend_eq", t), 0.0, 0.0, {c, b}, {1.0, -1.0});
            } else {
                double relax = std::max(-inst.initial_inventory, 0.0);
                for (int k = 1; k <= t; ++k) relax += dbar(k);
                p.add_row(sub("cend_link", t), -relax, kInf,
                          {c, b, model.var_delta(t + 1)}, {1.0, -1.0, -relax});
            }
        }
    }

    // Horizon-wide fill rate: sum_t C_t <= (1-beta) sum_t dbar_t.
    void add_beta_cap() {
        auto& p = model.problem;
        std::vector<int> idx;
        std::vector<double> coef;
        for (int t = 1; t <= n; ++t) {
            idx.push_back(model.cend[static_cast<std::size_t>(t - 1)]);
            coef.push_back(1.0);
        }
        p.add_row("beta_cap", -kInf, (1.0 - inst.service_level) * total_mean(), idx, coef);
    }

    MilpModel take() && { return std::move(model); }
};

MilpModel build_backorder(const LotSizingInstance& inst, const LinearizationSet& lins,
                          const ModelVariant& variant, const BuildOptions& opts) {
    Builder b(inst, lins, variant, opts);
    const bool with_bneg = variant.measure != Measure::alpha;
    const bool with_cend = variant.measure == Measure::beta;
    b.add_core_variables(with_bneg, with_cend);
    b.add_inventory_rows();
    b.add_p_machinery();
    b.add_ipos_piecewise();
    switch (variant.measure) {
        case Measure::alpha: b.add_alpha_rows(); break;
        case Measure::penalty: b.add_bneg_piecewise(); break;
        case Measure::beta_cyc:
            b.add_bneg_piecewise();
            b.add_beta_cyc_rows();
            break;
        case Measure::beta:
            b.add_bneg_piecewise();
            b.add_cycle_end_rows();
            b.add_beta_cap();
            break;
    }
    return std::move(b).take();
}

}  // namespace

MilpModel build_alpha_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                            Direction dir) {
    return build_backorder(inst, lins, {Measure::alpha, Shortage::backorder, dir}, {});
}

MilpModel build_penalty_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                              Direction dir) {
    return build_backorder(inst, lins, {Measure::penalty, Shortage::backorder, dir}, {});
}

MilpModel build_beta_cyc_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                               Direction dir) {
    return build_backorder(inst, lins, {Measure::beta_cyc, Shortage::backorder, dir}, {});
}

MilpModel build_beta_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                           Direction dir) {
    return build_backorder(inst, lins, {Measure::beta, Shortage::backorder, dir}, {});
}

MilpModel build_lost_sales_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                                 const ModelVariant& variant, const BuildOptions& opts) {
    if (variant.shortage != Shortage::lost_sales)
        throw ConfigError("build_lost_sales_model: variant.shortage must be lost_sales");
    Builder b(inst, lins, variant, opts);
    const bool with_bneg = variant.measure != Measure::alpha;
    const bool with_cend = variant.measure == Measure::beta ||
                           variant.penalty_basis == PenaltyBasis::per_unit_short;
    b.add_core_variables(with_bneg, with_cend);
    b.add_inventory_rows();
    b.add_lost_sales_linking();
    b.add_p_machinery();
    b.add_ipos_piecewise();
    switch (variant.measure) {
        case Measure::alpha: b.add_alpha_rows(); break;
        case Measure::penalty:
            b.add_bneg_piecewise();
            if (variant.penalty_basis == PenaltyBasis::per_unit_short) b.add_cycle_end_rows();
            break;
        case Measure::beta_cyc:
            b.add_bneg_piecewise();
            b.add_beta_cyc_rows();
            break;
        case Measure::beta:
            b.add_bneg_piecewise();
            b.add_cycle_end_rows();
            b.add_beta_cap();
            break;
    }
    return std::move(b).take();
}

MilpModel build_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                      const ModelVariant& variant, const BuildOptions& opts) {
    if (variant.shortage == Shortage::lost_sales)
        return build_lost_sales_model(inst, lins, variant, opts);
    return build_backorder(inst, lins, variant, opts);
}

}  // namespace stodyn::models
