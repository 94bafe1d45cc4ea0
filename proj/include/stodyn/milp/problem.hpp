#pragma once

#include <limits>
#include <string>
#include <vector>

namespace stodyn::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };

enum class Status { optimal, infeasible, unbounded, limit };

const char* status_name(Status s);

// A mixed-integer linear program: bounded variables, ranged rows
// row_lb <= a'x <= row_ub, and an objective with an explicit constant term.
class Problem {
public:
    int add_variable(std::string name, double lb, double ub, double obj, bool integer);
    // Terms may repeat a variable; they are accumulated.
    int add_row(std::string name, double lb, double ub, std::vector<int> idx,
                std::vector<double> coef);

    int num_variables() const { return static_cast<int>(obj_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    int num_integer() const { return num_integer_; }

    struct Row {
        std::string name;
        double lb, ub;
        std::vector<int> idx;
        std::vector<double> coef;
    };

    Sense sense = Sense::minimize;
    double objective_constant = 0.0;

    const std::vector<double>& objective() const { return obj_; }
    const std::vector<double>& lower() const { return lb_; }
    const std::vector<double>& upper() const { return ub_; }
    const std::vector<bool>& is_integer() const { return int_; }
    const std::vector<std::string>& variable_names() const { return names_; }
    const std::vector<Row>& rows() const { return rows_; }

    void set_bounds(int var, double lb, double ub);

    // Largest bound/row violation of an assignment (integrality excluded).
    double max_violation(const std::vector<double>& x) const;
    // Largest |x_j - round(x_j)| over integer variables.
    double max_integer_violation(const std::vector<double>& x) const;
    // Objective value of an assignment, in the problem's own sense.
    double objective_value(const std::vector<double>& x) const;

private:
    std::vector<double> obj_, lb_, ub_;
    std::vector<bool> int_;
    std::vector<std::string> names_;
    std::vector<Row> rows_;
    int num_integer_ = 0;
};

struct Solution {
    Status status = Status::limit;
    double objective = 0.0;          // includes the constant, problem sense
    double best_bound = 0.0;         // proven bound on the optimum, problem sense
    std::vector<double> values;      // empty unless a feasible point exists
    long nodes = 0;
    long lp_iterations = 0;
    double wall_seconds = 0.0;
};

struct SolverConfig {
    double relative_gap = 1e-7;      // proven-gap target for "optimal"
    double integrality_tol = 1e-6;
    double time_limit_seconds = 120.0;
    long node_limit = 5'000'000;
    bool enable_rounding_heuristic = true;
    // Variables fixed first by the rounding heuristic (e.g. review binaries).
    std::vector<int> heuristic_priority;
};

}  // namespace stodyn::milp
