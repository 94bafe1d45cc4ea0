#include "stodyn/milp/problem.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace stodyn::milp {

const char* status_name(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        case Status::limit: return "limit";
    }
    return "?";
}

int Problem::add_variable(std::string name, double lb, double ub, double obj, bool integer) {
    if (lb > ub) throw std::invalid_argument("add_variable: lb > ub for " + name);
    names_.push_back(std::move(name));
    lb_.push_back(lb);
    ub_.push_back(ub);
    obj_.push_back(obj);
    int_.push_back(integer);
    if (integer) ++num_integer_;
    return num_variables() - 1;
}

int Problem::add_row(std::string name, double lb, double ub, std::vector<int> idx,
                     std::vector<double> coef) {
    if (idx.size() != coef.size()) throw std::invalid_argument("add_row: idx/coef size mismatch");
    // Accumulate duplicate indices so builders can emit terms freely.
    std::map<int, double> acc;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= num_variables())
            throw std::invalid_argument("add_row: variable index out of range in " + name);
        acc[idx[i]] += coef[i];
    }
    Row row;
    row.name = std::move(name);
    row.lb = lb;
    row.ub = ub;
    for (const auto& [j, c] : acc) {
        if (c == 0.0) continue;
        row.idx.push_back(j);
        row.coef.push_back(c);
    }
    rows_.push_back(std::move(row));
    return num_rows() - 1;
}

void Problem::set_bounds(int var, double lb, double ub) {
    lb_[static_cast<std::size_t>(var)] = lb;
    ub_[static_cast<std::size_t>(var)] = ub;
}

double Problem::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (int j = 0; j < num_variables(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        worst = std::max(worst, lb_[ju] - x[ju]);
        worst = std::max(worst, x[ju] - ub_[ju]);
    }
    for (const Row& r : rows_) {
        double a = 0.0;
        for (std::size_t k = 0; k < r.idx.size(); ++k)
            a += r.coef[k] * x[static_cast<std::size_t>(r.idx[k])];
        worst = std::max(worst, r.lb - a);
        worst = std::max(worst, a - r.ub);
    }
    return worst;
}

double Problem::max_integer_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (int j = 0; j < num_variables(); ++j)
        if (int_[static_cast<std::size_t>(j)]) {
            const double v = x[static_cast<std::size_t>(j)];
            worst = std::max(worst, std::fabs(v - std::round(v)));
        }
    return worst;
}

double Problem::objective_value(const std::vector<double>& x) const {
    double v = objective_constant;
    for (int j = 0; j < num_variables(); ++j)
        v += obj_[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    return v;
}

}  // namespace stodyn::milp
