#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stodyn::cli {

// Runs one subcommand of {solve, bounds, evaluate, simulate, partition,
// bench}. Returns 0 on success, 2 when a requested model is infeasible,
// 1 on configuration or environment errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stodyn::cli
