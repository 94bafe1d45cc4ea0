#include "stodyn/cli/app.hpp"

#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "stodyn/bench/gap_study.hpp"
#include "stodyn/bench/testbed.hpp"
#include "stodyn/errors.hpp"
#include "stodyn/evaluate/evaluate.hpp"
#include "stodyn/io/instance_json.hpp"
#include "stodyn/linloss/search.hpp"
#include "stodyn/milp/lp_format.hpp"
#include "stodyn/models/builders.hpp"
#include "stodyn/models/solve.hpp"

#include <json.hpp>

namespace stodyn::cli {

namespace {

using json = nlohmann::json;
using models::Direction;
using models::LinearizationSet;
using models::Measure;
using models::MilpModel;
using models::ModelVariant;
using models::Policy;
using models::Shortage;
using probdist::ConvolutionTable;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;

bool all_normal(const probdist::DemandProcess& process) {
    for (const auto& d : process.periods())
        if (d.kind() != probdist::Kind::normal) return false;
    return true;
}

// Resolves the partition strategy ("auto" picks the standard-normal table
// for all-normal demand, uniform otherwise) and builds the shared
// linearization set.
LinearizationSet make_linearizations(const io::InstanceFile& file, int segments,
                                     const std::string& strategy_override) {
    std::string strategy =
        strategy_override.empty() ? file.partition.strategy : strategy_override;
    if (strategy == "auto")
        strategy = all_normal(file.instance.demand) ? "normal_table" : "uniform";
    if (strategy == "normal_table") {
        if (!all_normal(file.instance.demand))
            throw ConfigError("normal_table partitioning requires all-normal demand");
        return LinearizationSet::build_normal_scaled(file.instance.demand,
                                                     linloss::standard_normal_table(segments));
    }
    auto table = std::make_shared<ConvolutionTable>(file.instance.demand);
    if (strategy == "uniform")
        return LinearizationSet::build(table, linloss::uniform_partition(segments));
    if (strategy == "search") {
        std::vector<probdist::Distribution> laws;
        for (int j = 1; j <= table->horizon(); ++j)
            for (int t = j; t <= table->horizon(); ++t) laws.push_back(table->law(j, t));
        return LinearizationSet::build(
            table, linloss::optimize_partition(laws, segments, file.partition.search));
    }
    throw ConfigError("unknown partition strategy '" + strategy + "'");
}

ModelVariant variant_of(const io::InstanceFile& file, Direction dir) {
    return ModelVariant{file.instance.measure, file.shortage, dir, file.penalty_basis};
}

void print_policy(std::ostream& out, const Policy& policy) {
    out << "reviews {";
    bool first = true;
    for (int t : policy.reviews) {
        if (!first) out << ", ";
        out << t << ": " << policy.level(t);
        first = false;
    }
    out << "}\n";
}

int cmd_solve(std::ostream& out, const std::string& instance_path, const std::string& direction,
              int segments, const std::string& strategy, const std::string& export_lp,
              double time_limit) {
    io::InstanceFile file = io::load_instance_file(instance_path);
    if (segments > 0) file.partition.segments = segments;
    LinearizationSet lins = make_linearizations(file, file.partition.segments, strategy);

    std::vector<Direction> dirs;
    if (direction == "lb")
        dirs = {Direction::lower_bound};
    else if (direction == "ub")
        dirs = {Direction::upper_bound};
    else if (direction == "both")
        dirs = {Direction::lower_bound, Direction::upper_bound};
    else
        throw ConfigError("--direction must be lb, ub or both");

    models::SolveOptions options;
    options.time_limit_seconds = time_limit;
    int status_code = kOk;
    for (Direction dir : dirs) {
        MilpModel model = models::build_model(file.instance, lins, variant_of(file, dir));
        if (!export_lp.empty()) {
            std::ofstream lp(export_lp + (dirs.size() > 1 ? std::string(".") +
                                                                models::direction_name(dir)
                                                          : std::string()));
            milp::write_lp(lp, model.problem);
        }
        models::SolverSolution sol = models::solve(model, options);
        out << "direction " << models::direction_name(dir) << "\n";
        out << "status " << milp::status_name(sol.status) << "\n";
        if (sol.status == milp::Status::optimal) {
            out << "objective " << std::setprecision(10) << sol.objective << "\n";
            print_policy(out, models::extract_policy(sol, model));
        } else if (sol.status == milp::Status::infeasible) {
            status_code = kInfeasible;
        } else {
            out << "best_bound " << sol.best_bound << "\n";
            status_code = kError;
        }
    }
    return status_code;
}

int cmd_bounds(std::ostream& out, const std::string& instance_path, int segments,
               const std::string& strategy, double time_limit) {
    io::InstanceFile file = io::load_instance_file(instance_path);
    if (segments > 0) file.partition.segments = segments;
    LinearizationSet lins = make_linearizations(file, file.partition.segments, strategy);

    models::SolveOptions options;
    options.time_limit_seconds = time_limit;
    MilpModel lb_model = models::build_model(file.instance, lins,
                                             variant_of(file, Direction::lower_bound));
    MilpModel ub_model = models::build_model(file.instance, lins,
                                             variant_of(file, Direction::upper_bound));
    models::SolverSolution lb = models::solve(lb_model, options);
    models::SolverSolution ub = models::solve(ub_model, options);
    if (lb.status == milp::Status::infeasible || ub.status == milp::Status::infeasible) {
        out << "status infeasible\n";
        return kInfeasible;
    }
    if (lb.status != milp::Status::optimal || ub.status != milp::Status::optimal) {
        out << "status limit\n";
        return kError;
    }
    const bool profit = file.shortage == Shortage::lost_sales;
    out << std::setprecision(10);
    out << "lb_objective " << lb.objective << "\n";
    out << "ub_objective " << ub.objective << "\n";
    out << "gap " << evaluate::optimality_gap(lb.objective, ub.objective) << "\n";
    const MilpModel& certified_model = profit ? lb_model : ub_model;
    const models::SolverSolution& certified = profit ? lb : ub;
    Policy policy = models::extract_policy(certified, certified_model);
    const double exact = evaluate::exact_policy_cost(policy, file.instance,
                                                     variant_of(file, Direction::upper_bound))
                             .objective;
    out << "exact_" << (profit ? "profit" : "cost") << "_of_" << (profit ? "lb" : "ub")
        << "_policy " << exact << "\n";
    print_policy(out, policy);
    return kOk;
}

int cmd_evaluate(std::ostream& out, const std::string& instance_path,
                 const std::string& policy_path) {
    io::InstanceFile file = io::load_instance_file(instance_path);
    Policy policy = io::load_policy_file(policy_path);
    evaluate::EvaluationReport rep = evaluate::exact_policy_cost(
        policy, file.instance, variant_of(file, Direction::upper_bound));
    out << rep.to_text();
    return kOk;
}

int cmd_simulate(std::ostream& out, const std::string& instance_path,
                 const std::string& policy_path, long reps, std::uint64_t seed, bool truncate) {
    io::InstanceFile file = io::load_instance_file(instance_path);
    Policy policy = io::load_policy_file(policy_path);
    evaluate::SimulationOptions options;
    options.truncate_demand_at_zero = truncate;
    evaluate::EvaluationReport rep = evaluate::simulate_policy(
        policy, file.instance, variant_of(file, Direction::upper_bound), reps, seed, options);
    out << rep.to_text();
    return kOk;
}

int cmd_partition(std::ostream& out, const std::string& inputs_path, int segments,
                  int population, double step, std::uint64_t seed, bool uniform) {
    std::vector<probdist::Distribution> dists = io::load_distribution_list(inputs_path);
    linloss::Partition partition = linloss::uniform_partition(segments);
    if (!uniform) {
        linloss::SearchConfig cfg;
        if (population > 0) cfg.population_size = population;
        if (step > 0) cfg.step_size = step;
        cfg.seed = seed;
        partition = linloss::optimize_partition(dists, segments, cfg);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        const auto lin = linloss::linearize(dists[i], partition);
        worst = std::max(worst, lin.max_error);
        out << "# " << dists[i].describe() << "\n" << lin.dump();
    }
    out << "# minimax over inputs\ne_W " << std::setprecision(12) << worst << "\n";
    return kOk;
}

int cmd_bench(std::ostream& out, const std::string& config_path, const std::string& out_path) {
    json cfg;
    {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        try {
            cfg = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("bench config is not valid JSON: ") + e.what());
        }
    }
    for (const auto& [key, value] : cfg.items()) {
        static const std::vector<std::string> known{
            "patterns", "horizon", "a", "v", "levels", "cv", "measure", "shortage",
            "heterogeneous", "segments", "strategies", "seed", "time_limit", "threads",
            "search"};
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown key '" + key + "' in bench config");
    }

    bench::TestBedConfig bed_cfg;
    if (!cfg.contains("patterns")) throw ConfigError("bench config needs 'patterns'");
    bed_cfg.patterns = cfg["patterns"].get<std::vector<std::string>>();
    if (cfg.contains("horizon")) bed_cfg.horizon = cfg["horizon"].get<int>();
    if (cfg.contains("a")) bed_cfg.fixed_costs = cfg["a"].get<std::vector<double>>();
    if (cfg.contains("v")) bed_cfg.unit_costs = cfg["v"].get<std::vector<double>>();
    if (cfg.contains("levels")) bed_cfg.levels = cfg["levels"].get<std::vector<double>>();
    if (cfg.contains("cv")) bed_cfg.cvs = cfg["cv"].get<std::vector<double>>();
    if (cfg.contains("seed")) bed_cfg.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("heterogeneous")) bed_cfg.heterogeneous = cfg["heterogeneous"].get<bool>();
    Measure measure = Measure::alpha;
    if (cfg.contains("measure")) {
        const std::string m = cfg["measure"].get<std::string>();
        if (m == "alpha")
            measure = Measure::alpha;
        else if (m == "penalty")
            measure = Measure::penalty;
        else if (m == "beta_cyc")
            measure = Measure::beta_cyc;
        else if (m == "beta")
            measure = Measure::beta;
        else
            throw ConfigError("unknown measure '" + m + "' in bench config");
    }
    bed_cfg.measure = measure;

    Shortage shortage = Shortage::backorder;
    if (cfg.contains("shortage")) {
        const std::string s = cfg["shortage"].get<std::string>();
        if (s == "backorder")
            shortage = Shortage::backorder;
        else if (s == "lost_sales")
            shortage = Shortage::lost_sales;
        else
            throw ConfigError("unknown shortage '" + s + "' in bench config");
    }

    bench::GapStudyConfig study;
    if (cfg.contains("segments")) study.segment_counts = cfg["segments"].get<std::vector<int>>();
    if (cfg.contains("strategies")) {
        study.strategies.clear();
        for (const auto& s : cfg["strategies"].get<std::vector<std::string>>()) {
            if (s == "uniform")
                study.strategies.push_back(bench::PartitionStrategy::uniform);
            else if (s == "normal_table")
                study.strategies.push_back(bench::PartitionStrategy::normal_table);
            else if (s == "search")
                study.strategies.push_back(bench::PartitionStrategy::search);
            else
                throw ConfigError("unknown strategy '" + s + "' in bench config");
        }
    }
    if (cfg.contains("time_limit"))
        study.solve.time_limit_seconds = cfg["time_limit"].get<double>();
    if (cfg.contains("threads")) study.threads = cfg["threads"].get<int>();
    if (cfg.contains("search")) {
        const json& s = cfg["search"];
        if (s.contains("population")) study.search.population_size = s["population"].get<int>();
        if (s.contains("step")) study.search.step_size = s["step"].get<double>();
        if (s.contains("seed")) study.search.seed = s["seed"].get<std::uint64_t>();
    }

    auto bed = bench::generate_testbed(bed_cfg);
    std::vector<ModelVariant> variants{ModelVariant{measure, shortage, Direction::upper_bound}};
    bench::GapStudyReport report = bench::run_gap_study(bed, variants, study);

    {
        std::ofstream csv(out_path);
        if (!csv) throw ConfigError("cannot write report: " + out_path);
        bench::write_csv(csv, report);
    }
    {
        std::ofstream summary(out_path + ".summary.csv");
        bench::write_summary_csv(summary, report);
    }
    out << "instances " << bed.size() << "\n";
    out << "rows " << report.rows.size() << "\n";
    out << "report " << out_path << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bound-based solver toolkit for non-stationary stochastic lot sizing"};
    app.require_subcommand(1);

    std::string instance_path, policy_path, direction = "both", strategy, export_lp;
    std::string inputs_path, config_path, out_path = "report.csv";
    int segments = 0;
    int population = 0;
    double step = 0;
    long reps = 100000;
    std::uint64_t seed = 1;
    bool truncate = false;
    bool uniform = false;
    double time_limit = 120.0;

    auto* solve = app.add_subcommand("solve", "solve one bound model and print the policy");
    solve->add_option("--instance", instance_path, "instance JSON file")->required();
    solve->add_option("--direction", direction, "lb, ub or both (default both)");
    solve->add_option("--segments", segments, "piecewise segments W (default from file, else 11)");
    solve->add_option("--strategy", strategy, "uniform | normal_table | search | auto");
    solve->add_option("--export-lp", export_lp, "write the model in LP format");
    solve->add_option("--time-limit", time_limit, "solver time limit in seconds");

    auto* bounds = app.add_subcommand("bounds", "solve both bounds, print gap and exact cost");
    bounds->add_option("--instance", instance_path, "instance JSON file")->required();
    bounds->add_option("--segments", segments, "piecewise segments W");
    bounds->add_option("--strategy", strategy, "uniform | normal_table | search | auto");
    bounds->add_option("--time-limit", time_limit, "solver time limit in seconds");

    auto* eval = app.add_subcommand("evaluate", "exact evaluation of a policy file");
    eval->add_option("--instance", instance_path, "instance JSON file")->required();
    eval->add_option("--policy", policy_path, "policy JSON file")->required();

    auto* sim = app.add_subcommand("simulate", "Monte Carlo evaluation of a policy file");
    sim->add_option("--instance", instance_path, "instance JSON file")->required();
    sim->add_option("--policy", policy_path, "policy JSON file")->required();
    sim->add_option("--reps", reps, "replications (default 100000)");
    sim->add_option("--seed", seed, "random seed");
    sim->add_flag("--truncate-at-zero", truncate, "truncate sampled demand at zero");

    auto* part = app.add_subcommand("partition", "search a partition and dump linearizations");
    part->add_option("--inputs", inputs_path, "JSON array of distribution literals")->required();
    part->add_option("--segments", segments, "regions W (default 11)");
    part->add_option("--population", population, "random-sampling population size");
    part->add_option("--step", step, "coordinate-descent step size");
    part->add_option("--seed", seed, "random seed");
    part->add_flag("--uniform", uniform, "dump the uniform partition instead of searching");

    auto* bench_cmd = app.add_subcommand("bench", "run a gap study over a generated test bed");
    bench_cmd->add_option("--config", config_path, "bench config JSON")->required();
    bench_cmd->add_option("--out", out_path, "CSV report path (default report.csv)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kError;
    }

    try {
        if (solve->parsed())
            return cmd_solve(out, instance_path, direction, segments, strategy, export_lp,
                             time_limit);
        if (bounds->parsed()) return cmd_bounds(out, instance_path, segments, strategy, time_limit);
        if (eval->parsed()) return cmd_evaluate(out, instance_path, policy_path);
        if (sim->parsed()) return cmd_simulate(out, instance_path, policy_path, reps, seed, truncate);
        if (part->parsed())
            return cmd_partition(out, inputs_path, segments > 0 ? segments : 11, population, step,
                                 seed, uniform);
        if (bench_cmd->parsed()) return cmd_bench(out, config_path, out_path);
    } catch (const EnvironmentError& e) {
        err << "environment error: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    err << "error: no subcommand\n";
    return kError;
}

}  // namespace stodyn::cli
