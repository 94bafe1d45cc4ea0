#pragma once

#include <vector>

#include "stodyn/milp/problem.hpp"
#include "stodyn/models/instance.hpp"
#include "stodyn/models/linearizations.hpp"

namespace stodyn::models {

struct BuildOptions {
    // eq:reordering_milp_ls_3 is implemented as printed (M * Q_t); this
    // switch substitutes the tighter delta-based form.
    bool tighten_lost_sales_linking = false;
};

// The certainty-equivalent MILP of one variant plus the index maps needed to
// read a solution back (delta_t, P_jt, Ihat_t, the bound family, Q_t).
struct MilpModel {
    milp::Problem problem;
    ModelVariant variant;
    int horizon = 0;

    std::vector<int> delta;               // delta_t
    std::vector<int> ihat;                // expected closing net inventory
    std::vector<int> ipos;                // Ilb_t or Iub_t family (one only)
    std::vector<int> bneg;                // Blb_t / Bub_t (empty when unused)
    std::vector<int> cend;                // cycle-end backorder variables
    std::vector<int> qty;                 // lost-sales expected order quantity
    std::vector<std::vector<int>> pvar;   // pvar[t-1][j-1], j <= t
    std::vector<double> big_m;            // M_t
    std::vector<double> period_mean;      // d̃_t

    int var_delta(int t) const { return delta[static_cast<std::size_t>(t - 1)]; }
    int var_ihat(int t) const { return ihat[static_cast<std::size_t>(t - 1)]; }
    int var_p(int j, int t) const {
        return pvar[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(j - 1)];
    }
};

MilpModel build_alpha_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                            Direction dir);
MilpModel build_penalty_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                              Direction dir);
MilpModel build_beta_cyc_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                               Direction dir);
MilpModel build_beta_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                           Direction dir);
MilpModel build_lost_sales_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                                 const ModelVariant& variant, const BuildOptions& opts = {});

// Dispatch on the full (measure, shortage, direction) cell.
MilpModel build_model(const LotSizingInstance& inst, const LinearizationSet& lins,
                      const ModelVariant& variant, const BuildOptions& opts = {});

}  // namespace stodyn::models
