#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "stodyn/cli/app.hpp"
#include "stodyn/io/instance_json.hpp"

using namespace stodyn;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/stodyn_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

const char* kAlphaInstance = R"({
  "horizon": 1,
  "costs": {"a": 100, "v": 0, "h": 1},
  "initial_inventory": 0,
  "service": {"measure": "alpha", "level": 0.95},
  "shortage": "backorder",
  "demand": [{"kind": "normal", "mean": 100, "stdev": 10}],
  "partition": {"strategy": "normal_table", "W": 7}
})";

const char* kDeterministicInstance = R"({
  "costs": {"a": 500, "v": 0, "h": 1},
  "service": {"measure": "alpha", "level": 0.95},
  "demand": [
    {"kind": "grid", "points": [100], "probabilities": [1]},
    {"kind": "grid", "points": [100], "probabilities": [1]},
    {"kind": "grid", "points": [100], "probabilities": [1]},
    {"kind": "grid", "points": [100], "probabilities": [1]}
  ],
  "partition": {"strategy": "uniform", "W": 3}
})";

}  // namespace

TEST_CASE("instance file round trip") {
    io::InstanceFile file = io::parse_instance_json(kAlphaInstance);
    CHECK(file.instance.horizon() == 1);
    CHECK(file.instance.service_level == doctest::Approx(0.95));
    CHECK(file.partition.segments == 7);
    const std::string text = io::instance_to_json(file);
    io::InstanceFile again = io::parse_instance_json(text);
    CHECK(again.instance.fixed_order_cost == file.instance.fixed_order_cost);
    CHECK(again.instance.demand.period(1).mean() == file.instance.demand.period(1).mean());
    CHECK(again.partition.strategy == file.partition.strategy);
    CHECK(again.shortage == file.shortage);
}

TEST_CASE("unknown keys are rejected by name") {
    const char* bad = R"({
      "costs": {"a": 1, "v": 0, "h": 1},
      "service": {"measure": "alpha", "level": 0.9},
      "demand": [{"kind": "normal", "mean": 10, "stdev": 1}],
      "extra_knob": 3
    })";
    try {
        io::parse_instance_json(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("extra_knob") != std::string::npos);
    }

    const char* bad_dist = R"({
      "costs": {"a": 1, "v": 0, "h": 1},
      "service": {"measure": "alpha", "level": 0.9},
      "demand": [{"kind": "normal", "mean": 10, "stdev": 1, "skew": 2}]
    })";
    try {
        io::parse_instance_json(bad_dist);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("skew") != std::string::npos);
    }
}

TEST_CASE("bounds output brackets the exact cost") {
    const std::string path = write_temp("alpha.json", kAlphaInstance);
    std::string out;
    const int code = run_cli({"bounds", "--instance", path}, &out);
    CHECK(code == 0);
    std::istringstream is(out);
    std::string key;
    double lb = 0, ub = 0, gap = -1, exact = 0;
    while (is >> key) {
        if (key == "lb_objective") is >> lb;
        else if (key == "ub_objective") is >> ub;
        else if (key == "gap") is >> gap;
        else if (key == "exact_cost_of_ub_policy") is >> exact;
        else is.ignore(1024, '\n');
    }
    CHECK(lb <= 116.66);
    CHECK(ub >= 116.65);
    CHECK(lb <= exact);
    CHECK(exact <= ub + 1e-9);
    CHECK(gap >= 0.0);
}

TEST_CASE("solve prints the deterministic plan") {
    const std::string path = write_temp("det.json", kDeterministicInstance);
    std::string out;
    const int code = run_cli({"solve", "--instance", path, "--direction", "ub"}, &out);
    CHECK(code == 0);
    CHECK(out.find("objective 1100") != std::string::npos);
    CHECK(out.find("{1: 400}") != std::string::npos);
}

TEST_CASE("evaluate and simulate read a policy file") {
    const std::string inst_path = write_temp("det2.json", kDeterministicInstance);
    const std::string policy_path =
        write_temp("pol.json", R"({"reviews": [{"period": 1, "level": 400}]})");
    std::string out;
    CHECK(run_cli({"evaluate", "--instance", inst_path, "--policy", policy_path}, &out) == 0);
    CHECK(out.find("expected_cost 1100") != std::string::npos);
    CHECK(run_cli({"simulate", "--instance", inst_path, "--policy", policy_path, "--reps",
                   "50", "--seed", "3"},
                  &out) == 0);
    CHECK(out.find("expected_cost 1100") != std::string::npos);
    CHECK(out.find("replications 50") != std::string::npos);
}

TEST_CASE("infeasible model exits with status 2") {
    const char* tight = R"({
      "costs": {"a": 0, "v": 0, "h": 1},
      "service": {"measure": "beta_cyc", "level": 0.97},
      "demand": [{"kind": "normal", "mean": 100, "stdev": 30},
                 {"kind": "normal", "mean": 100, "stdev": 30}],
      "partition": {"strategy": "uniform", "W": 2}
    })";
    const std::string path = write_temp("tight.json", tight);
    std::string out;
    const int code = run_cli({"solve", "--instance", path, "--direction", "ub"}, &out);
    CHECK(code == 2);
    CHECK(out.find("status infeasible") != std::string::npos);
}

TEST_CASE("partition subcommand dumps regions") {
    const std::string path = write_temp(
        "dists.json", R"([{"kind": "normal", "mean": 0, "stdev": 1},
                          {"kind": "exponential", "mean": 100}])");
    std::string out;
    const int code = run_cli({"partition", "--inputs", path, "--segments", "3", "--population",
                              "20", "--seed", "5"},
                             &out);
    CHECK(code == 0);
    CHECK(out.find("e_W") != std::string::npos);
    CHECK(out.find("# normal(0, 1)") != std::string::npos);

    // Uniform dump of a single law: three mass/mean lines.
    std::string uout;
    CHECK(run_cli({"partition", "--inputs", path, "--segments", "3", "--uniform"}, &uout) == 0);
    int lines = 0;
    std::istringstream is(uout);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') ++lines;
    CHECK(lines == 2 * 3 + 2 + 1);  // per-dist regions + per-dist e_W + minimax line
}

TEST_CASE("bench with an empty pattern list is a config error") {
    const std::string cfg = write_temp("bench_bad.json", R"({"patterns": []})");
    std::string out, errtext;
    const int code = run_cli({"bench", "--config", cfg, "--out", "/tmp/stodyn_test_report.csv"},
                             &out, &errtext);
    CHECK(code == 1);
    CHECK(errtext.find("pattern") != std::string::npos);
}

TEST_CASE("tiny bench run writes the report") {
    const std::string cfg = write_temp("bench_ok.json", R"({
      "patterns": ["STA"], "horizon": 3, "a": [250], "v": [2],
      "levels": [0.9], "cv": [0.2], "measure": "alpha", "shortage": "backorder",
      "segments": [2, 4], "strategies": ["normal_table"], "seed": 1, "time_limit": 60
    })");
    std::string out;
    const int code =
        run_cli({"bench", "--config", cfg, "--out", "/tmp/stodyn_test_report.csv"}, &out);
    CHECK(code == 0);
    std::ifstream csv("/tmp/stodyn_test_report.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header.find("instance_id") == 0);
    int data_rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == 2);
    std::ifstream summary("/tmp/stodyn_test_report.csv.summary.csv");
    CHECK(summary.good());
}

TEST_CASE("malformed file names the problem") {
    const std::string path = write_temp("broken.json", "{not json");
    std::string out, errtext;
    const int code = run_cli({"bounds", "--instance", path}, &out, &errtext);
    CHECK(code == 1);
    CHECK(errtext.find("JSON") != std::string::npos);
}
