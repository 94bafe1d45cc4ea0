#include "stodyn/milp/lp_format.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace stodyn::milp {

namespace {

void write_terms(std::ostream& os, const std::vector<int>& idx, const std::vector<double>& coef,
                 const std::vector<std::string>& names) {
    bool first = true;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const double c = coef[k];
        if (c == 0.0) continue;
        if (first) {
            if (c < 0.0) os << "- ";
        } else {
            os << (c < 0.0 ? " - " : " + ");
        }
        const double a = std::fabs(c);
        if (a != 1.0) os << a << " ";
        os << names[static_cast<std::size_t>(idx[k])];
        first = false;
    }
    if (first) os << "0 " << (names.empty() ? "x0" : names[0]);
}

}  // namespace

void write_lp(std::ostream& os, const Problem& p) {
    const auto& names = p.variable_names();
    os << (p.sense == Sense::maximize ? "Maximize" : "Minimize") << "\n obj:";
    bool first = true;
    for (int j = 0; j < p.num_variables(); ++j) {
        const double c = p.objective()[static_cast<std::size_t>(j)];
        if (c == 0.0) continue;
        os << (first ? (c < 0.0 ? " - " : " ") : (c < 0.0 ? " - " : " + "));
        const double a = std::fabs(c);
        if (a != 1.0) os << a << " ";
        os << names[static_cast<std::size_t>(j)];
        first = false;
    }
    if (first) os << " 0 " << (p.num_variables() > 0 ? names[0] : "x0");
    if (p.objective_constant != 0.0) {
        os << (p.objective_constant < 0.0 ? " - " : " + ")
           << std::fabs(p.objective_constant);
    }
    os << "\nSubject To\n";
    int anon = 0;
    for (const auto& row : p.rows()) {
        std::string name = row.name.empty() ? "c" + std::to_string(anon++) : row.name;
        const bool has_lb = std::isfinite(row.lb);
        const bool has_ub = std::isfinite(row.ub);
        if (has_lb && has_ub && row.lb == row.ub) {
            os << " " << name << ": ";
            write_terms(os, row.idx, row.coef, names);
            os << " = " << row.lb << "\n";
            continue;
        }
        if (has_lb) {
            os << " " << name << (has_ub ? "_lo" : "") << ": ";
            write_terms(os, row.idx, row.coef, names);
            os << " >= " << row.lb << "\n";
        }
        if (has_ub) {
            os << " " << name << (has_lb ? "_hi" : "") << ": ";
            write_terms(os, row.idx, row.coef, names);
            os << " <= " << row.ub << "\n";
        }
    }
    os << "Bounds\n";
    for (int j = 0; j < p.num_variables(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const double lo = p.lower()[ju], hi = p.upper()[ju];
        if (lo == 0.0 && hi == kInf) continue;  // LP default
        os << " ";
        if (lo == -kInf && hi == kInf) {
            os << names[ju] << " free\n";
            continue;
        }
        if (lo == -kInf)
            os << "-inf <= ";
        else
            os << lo << " <= ";
        os << names[ju];
        if (hi == kInf)
            os << "\n";
        else
            os << " <= " << hi << "\n";
    }
    bool any_int = false;
    for (int j = 0; j < p.num_variables(); ++j)
        if (p.is_integer()[static_cast<std::size_t>(j)]) {
            if (!any_int) os << "Generals\n";
            any_int = true;
            os << " " << names[static_cast<std::size_t>(j)] << "\n";
        }
    os << "End\n";
}

std::string to_lp_string(const Problem& p) {
    std::ostringstream os;
    os.precision(17);
    write_lp(os, p);
    return os.str();
}

}  // namespace stodyn::milp
