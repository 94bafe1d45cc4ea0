#include "stodyn/io/instance_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stodyn/errors.hpp"

namespace stodyn::io {

using json = nlohmann::json;
using models::LotSizingInstance;
using models::Measure;
using models::PenaltyBasis;
using models::Policy;
using models::Shortage;
using probdist::Distribution;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double require_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
    if (!obj[key].is_number()) throw ConfigError("key '" + std::string(key) + "' in " + where +
                                                 " must be a number");
    return obj[key].get<double>();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Distribution distribution_from_json(const json& d, const std::string& where) {
    if (!d.is_object()) throw ConfigError("distribution literal must be an object in " + where);
    if (!d.contains("kind")) throw ConfigError("missing key 'kind' in " + where);
    const std::string kind = d["kind"].get<std::string>();
    if (kind == "normal") {
        reject_unknown(d, {"kind", "mean", "stdev"}, where);
        return Distribution::normal(require_number(d, "mean", where),
                                    require_number(d, "stdev", where));
    }
    if (kind == "poisson") {
        reject_unknown(d, {"kind", "mean"}, where);
        return Distribution::poisson(require_number(d, "mean", where));
    }
    if (kind == "exponential") {
        reject_unknown(d, {"kind", "mean"}, where);
        return Distribution::exponential(require_number(d, "mean", where));
    }
    if (kind == "uniform") {
        reject_unknown(d, {"kind", "lower", "upper"}, where);
        return Distribution::uniform(require_number(d, "lower", where),
                                     require_number(d, "upper", where));
    }
    if (kind == "grid") {
        reject_unknown(d, {"kind", "points", "probabilities"}, where);
        if (!d.contains("points") || !d.contains("probabilities"))
            throw ConfigError("grid literal needs 'points' and 'probabilities' in " + where);
        return Distribution::grid(d["points"].get<std::vector<double>>(),
                                  d["probabilities"].get<std::vector<double>>());
    }
    throw ConfigError("unknown distribution kind '" + kind + "' in " + where);
}

json distribution_to_json(const Distribution& d) {
    json out;
    switch (d.kind()) {
        case probdist::Kind::normal:
            out = {{"kind", "normal"}, {"mean", d.param_a()}, {"stdev", d.param_b()}};
            break;
        case probdist::Kind::poisson: out = {{"kind", "poisson"}, {"mean", d.param_a()}}; break;
        case probdist::Kind::exponential:
            out = {{"kind", "exponential"}, {"mean", d.param_a()}};
            break;
        case probdist::Kind::uniform:
            out = {{"kind", "uniform"}, {"lower", d.param_a()}, {"upper", d.param_b()}};
            break;
        case probdist::Kind::grid:
            out = {{"kind", "grid"}, {"points", d.points()}, {"probabilities", d.masses()}};
            break;
    }
    return out;
}

Measure measure_from_string(const std::string& s, const std::string& where) {
    if (s == "alpha") return Measure::alpha;
    if (s == "penalty") return Measure::penalty;
    if (s == "beta_cyc") return Measure::beta_cyc;
    if (s == "beta") return Measure::beta;
    throw ConfigError("unknown service measure '" + s + "' in " + where);
}

}  // namespace

InstanceFile parse_instance_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("instance file is not valid JSON: ") + e.what());
    }
    reject_unknown(root,
                   {"id", "horizon", "costs", "initial_inventory", "service", "shortage",
                    "penalty_basis", "demand", "partition"},
                   "instance file");

    InstanceFile file;
    LotSizingInstance& inst = file.instance;
    if (root.contains("id")) inst.id = root["id"].get<std::string>();

    if (!root.contains("costs") || !root["costs"].is_object())
        throw ConfigError("missing 'costs' object in instance file");
    const json& costs = root["costs"];
    reject_unknown(costs, {"a", "v", "h", "b", "s"}, "costs");
    inst.fixed_order_cost = require_number(costs, "a", "costs");
    inst.unit_cost = require_number(costs, "v", "costs");
    inst.holding_cost = require_number(costs, "h", "costs");
    if (costs.contains("b")) inst.penalty_cost = costs["b"].get<double>();
    if (costs.contains("s")) inst.selling_price = costs["s"].get<double>();

    if (root.contains("initial_inventory"))
        inst.initial_inventory = root["initial_inventory"].get<double>();

    if (!root.contains("service") || !root["service"].is_object())
        throw ConfigError("missing 'service' object in instance file");
    const json& service = root["service"];
    reject_unknown(service, {"measure", "level"}, "service");
    if (!service.contains("measure")) throw ConfigError("missing key 'measure' in service");
    inst.measure = measure_from_string(service["measure"].get<std::string>(), "service");
    if (inst.measure != Measure::penalty)
        inst.service_level = require_number(service, "level", "service");
    else if (service.contains("level"))
        inst.penalty_cost = service["level"].get<double>();

    if (root.contains("shortage")) {
        const std::string s = root["shortage"].get<std::string>();
        if (s == "backorder")
            file.shortage = Shortage::backorder;
        else if (s == "lost_sales")
            file.shortage = Shortage::lost_sales;
        else
            throw ConfigError("unknown shortage mode '" + s + "'");
    }
    if (root.contains("penalty_basis")) {
        const std::string b = root["penalty_basis"].get<std::string>();
        if (b == "per_period")
            file.penalty_basis = PenaltyBasis::per_period;
        else if (b == "per_unit_short")
            file.penalty_basis = PenaltyBasis::per_unit_short;
        else
            throw ConfigError("unknown penalty_basis '" + b + "'");
    }

    if (!root.contains("demand") || !root["demand"].is_array() || root["demand"].empty())
        throw ConfigError("missing nonempty 'demand' array in instance file");
    std::vector<Distribution> periods;
    int idx = 1;
    for (const auto& d : root["demand"]) {
        periods.push_back(distribution_from_json(d, "demand[" + std::to_string(idx) + "]"));
        ++idx;
    }
    inst.demand = probdist::DemandProcess(std::move(periods));

    if (root.contains("horizon")) {
        const int n = root["horizon"].get<int>();
        if (n != inst.horizon())
            throw ConfigError("'horizon' disagrees with the demand array length");
    }

    if (root.contains("partition")) {
        const json& part = root["partition"];
        reject_unknown(part, {"strategy", "W", "search"}, "partition");
        if (part.contains("strategy")) file.partition.strategy = part["strategy"].get<std::string>();
        if (part.contains("W")) file.partition.segments = part["W"].get<int>();
        if (part.contains("search")) {
            const json& search = part["search"];
            reject_unknown(search, {"population", "step", "seed"}, "partition.search");
            if (search.contains("population"))
                file.partition.search.population_size = search["population"].get<int>();
            if (search.contains("step"))
                file.partition.search.step_size = search["step"].get<double>();
            if (search.contains("seed"))
                file.partition.search.seed = search["seed"].get<std::uint64_t>();
        }
        const std::string& strat = file.partition.strategy;
        if (strat != "auto" && strat != "uniform" && strat != "normal_table" && strat != "search")
            throw ConfigError("unknown partition strategy '" + strat + "'");
        if (file.partition.segments < 1)
            throw ConfigError("partition.W must be at least 1");
    }

    inst.validate(file.shortage);
    models::ModelVariant variant{inst.measure, file.shortage, models::Direction::upper_bound,
                                 file.penalty_basis};
    variant.validate();
    return file;
}

InstanceFile load_instance_file(const std::string& path) {
    return parse_instance_json(read_file(path));
}

std::string instance_to_json(const InstanceFile& file) {
    const LotSizingInstance& inst = file.instance;
    json root;
    if (!inst.id.empty()) root["id"] = inst.id;
    root["horizon"] = inst.horizon();
    json costs{{"a", inst.fixed_order_cost}, {"v", inst.unit_cost}, {"h", inst.holding_cost}};
    if (inst.measure == Measure::penalty) costs["b"] = inst.penalty_cost;
    if (file.shortage == Shortage::lost_sales) costs["s"] = inst.selling_price;
    root["costs"] = costs;
    root["initial_inventory"] = inst.initial_inventory;
    json service{{"measure", models::measure_name(inst.measure)}};
    if (inst.measure == Measure::penalty)
        service["level"] = inst.penalty_cost;
    else
        service["level"] = inst.service_level;
    root["service"] = service;
    root["shortage"] = models::shortage_name(file.shortage);
    if (file.penalty_basis == PenaltyBasis::per_unit_short) root["penalty_basis"] = "per_unit_short";
    json demand = json::array();
    for (const auto& d : inst.demand.periods()) demand.push_back(distribution_to_json(d));
    root["demand"] = demand;
    json part{{"strategy", file.partition.strategy}, {"W", file.partition.segments}};
    if (file.partition.strategy == "search") {
        part["search"] = json{{"population", file.partition.search.population_size},
                              {"step", file.partition.search.step_size},
                              {"seed", file.partition.search.seed}};
    }
    root["partition"] = part;
    return root.dump(2);
}

Policy parse_policy_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("policy file is not valid JSON: ") + e.what());
    }
    reject_unknown(root, {"reviews"}, "policy file");
    if (!root.contains("reviews") || !root["reviews"].is_array())
        throw ConfigError("policy file needs a 'reviews' array");
    Policy policy;
    for (const auto& r : root["reviews"]) {
        reject_unknown(r, {"period", "level"}, "policy review");
        const int period = r.at("period").get<int>();
        policy.reviews.push_back(period);
        policy.levels[period] = require_number(r, "level", "policy review");
    }
    std::sort(policy.reviews.begin(), policy.reviews.end());
    return policy;
}

Policy load_policy_file(const std::string& path) { return parse_policy_json(read_file(path)); }

std::string policy_to_json(const Policy& policy) {
    json reviews = json::array();
    for (int t : policy.reviews)
        reviews.push_back(json{{"period", t}, {"level", policy.level(t)}});
    return json{{"reviews", reviews}}.dump(2);
}

probdist::Distribution parse_distribution_json(const std::string& text) {
    json d;
    try {
        d = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("distribution literal is not valid JSON: ") + e.what());
    }
    return distribution_from_json(d, "distribution literal");
}

std::vector<probdist::Distribution> load_distribution_list(const std::string& path) {
    json root;
    try {
        root = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("distribution list is not valid JSON: ") + e.what());
    }
    std::vector<Distribution> out;
    if (root.is_object()) {
        out.push_back(distribution_from_json(root, "distribution list"));
        return out;
    }
    if (!root.is_array() || root.empty())
        throw ConfigError("distribution list must be a nonempty JSON array");
    int idx = 1;
    for (const auto& d : root) {
        out.push_back(distribution_from_json(d, "distributions[" + std::to_string(idx) + "]"));
        ++idx;
    }
    return out;
}

}  // namespace stodyn::io
