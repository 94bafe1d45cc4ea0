#include "stodyn/probdist/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stodyn::probdist {

DemandProcess::DemandProcess(std::vector<Distribution> periods) : periods_(std::move(periods)) {
    if (periods_.empty()) throw DomainError("DemandProcess: needs at least one period");
}

const Distribution& DemandProcess::period(int t) const {
    if (t < 1 || t > horizon()) throw std::out_of_range("DemandProcess: period out of range");
    return periods_[static_cast<std::size_t>(t - 1)];
}

double DemandProcess::range_mean(int j, int t) const {
    double s = 0.0;
    for (int k = j; k <= t; ++k) s += mean(k);
    return s;
}

namespace {

// Dense probability-mass array over an integer index range; index i stands
// for the value i*step. Integer indexing keeps summed supports aligned.
struct DenseGrid {
    long base = 0;  // value of mass[0] is base*step
    std::vector<double> mass;
};

// Atoms of one component law: equal-mass bins at conditional means for
// continuous kinds, the native support for discrete kinds.
struct AtomSet {
    std::vector<double> x;
    std::vector<double> m;
};

AtomSet discretize(const Distribution& d, int bins) {
    AtomSet a;
    if (d.is_discrete()) {
        a.x = d.points();
        a.m = d.masses();
        return a;
    }
    a.x.reserve(static_cast<std::size_t>(bins));
    a.m.reserve(static_cast<std::size_t>(bins));
    const double w = 1.0 / bins;
    for (int i = 0; i < bins; ++i) {
        a.x.push_back(d.mass_slice_mean(i * w, (i + 1) * w));
        a.m.push_back(w);
    }
    return a;
}

// Two-point linear deposit of the atoms onto the integer grid; preserves
// total mass and mean; out-of-window mass folds into the edge cells.
DenseGrid snap(const AtomSet& atoms, double step, long window_lo, long window_hi) {
    DenseGrid g;
    g.base = window_lo;
    g.mass.assign(static_cast<std::size_t>(window_hi - window_lo + 1), 0.0);
    const long n = window_hi - window_lo;
    for (std::size_t k = 0; k < atoms.x.size(); ++k) {
        const double f = atoms.x[k] / step - static_cast<double>(window_lo);
        double fi = std::floor(f);
        double w_hi = f - fi;
        long i = static_cast<long>(fi);
        if (i < 0) {
            i = 0;
            w_hi = 0.0;
        } else if (i >= n) {
            i = n - 1;
            w_hi = 1.0;
        }
        g.mass[static_cast<std::size_t>(i)] += atoms.m[k] * (1.0 - w_hi);
        g.mass[static_cast<std::size_t>(i) + 1] += atoms.m[k] * w_hi;
    }
    return g;
}

DenseGrid convolve_dense(const DenseGrid& a, const DenseGrid& b, long window_lo, long window_hi) {
    DenseGrid out;
    out.base = window_lo;
    out.mass.assign(static_cast<std::size_t>(window_hi - window_lo + 1), 0.0);
    const long last = window_hi - window_lo;
    for (std::size_t i = 0; i < a.mass.size(); ++i) {
        const double mi = a.mass[i];
        if (mi < 1e-18) continue;
        const long off = a.base + static_cast<long>(i) + b.base - window_lo;
        for (std::size_t k = 0; k < b.mass.size(); ++k) {
            long idx = off + static_cast<long>(k);
            if (idx < 0) idx = 0;
            if (idx > last) idx = last;
            out.mass[static_cast<std::size_t>(idx)] += mi * b.mass[k];
        }
    }
    return out;
}

Distribution grid_convolve(const std::vector<const Distribution*>& laws, int grid_points) {
    // Exact moments of the sum.
    double mu = 0.0, var = 0.0;
    for (const auto* d : laws) {
        mu += d->mean();
        var += d->variance();
    }
    const double sd = std::sqrt(var);
    if (sd == 0.0) {
        // All components degenerate.
        return Distribution::point_mass(mu);
    }

    // Window covering the support of every prefix sum (13 sigma on each
    // side, clipped to the attainable support of the discretized atoms).
    const int bins = std::max(16, grid_points / 2);
    std::vector<AtomSet> atoms;
    atoms.reserve(laws.size());
    for (const auto* d : laws) atoms.push_back(discretize(*d, bins));

    double front_sum = 0.0, back_sum = 0.0;
    double pmu = 0.0, pvar = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < laws.size(); ++k) {
        front_sum += atoms[k].x.front();
        back_sum += atoms[k].x.back();
        pmu += laws[k]->mean();
        pvar += laws[k]->variance();
        const double band = 13.0 * std::sqrt(pvar);
        lo = std::min(lo, std::max(front_sum, pmu - band));
        hi = std::max(hi, std::min(back_sum, pmu + band));
    }
    const double step = (hi - lo) / (grid_points - 1);
    const long window_lo = static_cast<long>(std::floor(lo / step)) - 1;
    const long window_hi = window_lo + grid_points + 1;

    DenseGrid running = snap(atoms[0], step, window_lo, window_hi);
    for (std::size_t k = 1; k < atoms.size(); ++k) {
        const long comp_lo = static_cast<long>(std::floor(atoms[k].x.front() / step)) - 1;
        const long comp_hi = static_cast<long>(std::ceil(atoms[k].x.back() / step)) + 1;
        DenseGrid comp = snap(atoms[k], step, comp_lo, comp_hi);
        running = convolve_dense(running, comp, window_lo, window_hi);
    }

    // Collect atoms, prune dust, renormalize, and match the exact moments.
    std::vector<double> pts, ms;
    double total = 0.0;
    for (double m : running.mass) total += m;
    for (std::size_t i = 0; i < running.mass.size(); ++i) {
        const double m = running.mass[i] / total;
        if (m < 1e-16) continue;
        pts.push_back(static_cast<double>(running.base + static_cast<long>(i)) * step);
        ms.push_back(m);
    }
    double msum = 0.0;
    for (double& m : ms) msum += m;
    for (double& m : ms) m /= msum;

    double m1 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) m1 += pts[i] * ms[i];
    double m2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = pts[i] - m1;
        m2 += ms[i] * dx * dx;
    }
    const double scale = m2 > 0.0 ? std::sqrt(var / m2) : 1.0;
    for (double& x : pts) x = mu + (x - m1) * scale;

    return Distribution::grid(std::move(pts), std::move(ms));
}

}  // namespace

Convolution convolve(const DemandProcess& process, int j, int t, int grid_points) {
    if (j < 1 || t > process.horizon() || j > t)
        throw std::out_of_range("convolve: requires 1 <= j <= t <= N");
    std::vector<const Distribution*> laws;
    laws.reserve(static_cast<std::size_t>(t - j + 1));
    bool all_normal = true, all_poisson = true;
    for (int k = j; k <= t; ++k) {
        const Distribution& d = process.period(k);
        laws.push_back(&d);
        all_normal = all_normal && d.kind() == Kind::normal;
        all_poisson = all_poisson && d.kind() == Kind::poisson;
    }
    if (laws.size() == 1) return {j, t, *laws[0]};
    if (all_normal) {
        double mu = 0.0, var = 0.0;
        for (const auto* d : laws) {
            mu += d->mean();
            var += d->variance();
        }
        return {j, t, Distribution::normal(mu, std::sqrt(var))};
    }
    if (all_poisson) {
        double mu = 0.0;
        for (const auto* d : laws) mu += d->mean();
        return {j, t, Distribution::poisson(mu)};
    }
    return {j, t, grid_convolve(laws, grid_points)};
}

ConvolutionTable::ConvolutionTable(const DemandProcess& process, int grid_points)
    : horizon_(process.horizon()) {
    laws_.reserve(static_cast<std::size_t>(horizon_) * (horizon_ + 1) / 2);
    for (int j = 1; j <= horizon_; ++j)
        for (int t = j; t <= horizon_; ++t) laws_.push_back(convolve(process, j, t, grid_points).law);
}

std::size_t ConvolutionTable::index(int j, int t) const {
    if (j < 1 || t > horizon_ || j > t)
        throw std::out_of_range("ConvolutionTable: range out of bounds");
    // Row j occupies (N - j + 1) entries starting after rows 1..j-1.
    const std::size_t row_start =
        static_cast<std::size_t>((j - 1)) * (2 * horizon_ - j + 2) / 2;
    return row_start + static_cast<std::size_t>(t - j);
}

const Distribution& ConvolutionTable::law(int j, int t) const { return laws_[index(j, t)]; }

}  // namespace stodyn::probdist
