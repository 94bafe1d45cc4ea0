#pragma once

#include <iosfwd>
#include <string>

#include "stodyn/milp/problem.hpp"

namespace stodyn::milp {

// CPLEX LP text format, for external inspection of a built model.
void write_lp(std::ostream& os, const Problem& problem);
std::string to_lp_string(const Problem& problem);

}  // namespace stodyn::milp
