#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "stodyn/linloss/search.hpp"
#include "stodyn/models/instance.hpp"

namespace stodyn::io {

// Partition selection carried by an instance file.
struct PartitionSpec {
    std::string strategy = "auto";  // auto | uniform | normal_table | search
    int segments = 11;
    linloss::SearchConfig search;
};

struct InstanceFile {
    models::LotSizingInstance instance;
    models::Shortage shortage = models::Shortage::backorder;
    models::PenaltyBasis penalty_basis = models::PenaltyBasis::per_period;
    PartitionSpec partition;
};

// Strict parser: unknown keys are rejected naming the offending key.
InstanceFile parse_instance_json(const std::string& text);
InstanceFile load_instance_file(const std::string& path);
std::string instance_to_json(const InstanceFile& file);

models::Policy parse_policy_json(const std::string& text);
models::Policy load_policy_file(const std::string& path);
std::string policy_to_json(const models::Policy& policy);

probdist::Distribution parse_distribution_json(const std::string& text);
std::vector<probdist::Distribution> load_distribution_list(const std::string& path);

}  // namespace stodyn::io
