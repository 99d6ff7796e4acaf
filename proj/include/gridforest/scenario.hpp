#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridforest/errors.hpp"
#include "gridforest/network.hpp"
#include "gridforest/rng.hpp"

namespace gridforest {

/// One fault case: branches whose switches are stuck (open or closed) and
/// load nodes whose switches are stuck (load shed or forced pickup).
struct FaultScenario {
    std::uint64_t seed = 0;
    std::vector<int> faulted_open_branches;   // branch ids forced open
    std::vector<int> faulted_closed_branches; // branch ids forced closed
    std::vector<int> faulted_open_nodes;      // load node ids forced shed
    std::vector<int> faulted_closed_nodes;    // load node ids forced served
    std::string label;

    bool empty() const {
        return faulted_open_branches.empty() && faulted_closed_branches.empty() &&
               faulted_open_nodes.empty() && faulted_closed_nodes.empty();
    }
};

/// Checks ids exist, the open/closed sets are disjoint, and no source node
/// carries a load-switch fault.
inline void validate_scenario(const Network& net, const FaultScenario& sc) {
    auto check_sorted_unique = [](const std::vector<int>& v, const char* what) {
        if (!std::is_sorted(v.begin(), v.end()) ||
            std::adjacent_find(v.begin(), v.end()) != v.end())
            throw NetworkError(std::string(what) + " ids must be ascending and unique");
    };
    check_sorted_unique(sc.faulted_open_branches, "faulted-open branch");
    check_sorted_unique(sc.faulted_closed_branches, "faulted-closed branch");
    check_sorted_unique(sc.faulted_open_nodes, "faulted-open node");
    check_sorted_unique(sc.faulted_closed_nodes, "faulted-closed node");
    for (int id : sc.faulted_open_branches)
        if (std::binary_search(sc.faulted_closed_branches.begin(),
                               sc.faulted_closed_branches.end(), id))
            throw NetworkError("branch " + std::to_string(id) +
                               " is faulted both open and closed");
    for (int id : sc.faulted_open_nodes)
        if (std::binary_search(sc.faulted_closed_nodes.begin(),
                               sc.faulted_closed_nodes.end(), id))
            throw NetworkError("node " + std::to_string(id) +
                               " is faulted both open and closed");
    for (int id : sc.faulted_open_branches)
        if (!net.has_branch(id))
            throw NetworkError("faulted branch " + std::to_string(id) + " does not exist");
    for (int id : sc.faulted_closed_branches)
        if (!net.has_branch(id))
            throw NetworkError("faulted branch " + std::to_string(id) + " does not exist");
    for (const auto* nodes : {&sc.faulted_open_nodes, &sc.faulted_closed_nodes})
        for (int id : *nodes) {
            if (!net.has_node(id))
                throw NetworkError("faulted node " + std::to_string(id) + " does not exist");
            if (net.node(net.node_index(id)).is_source())
                throw NetworkError("source node " + std::to_string(id) +
                                   " cannot carry a load-switch fault");
        }
}

struct FaultCounts {
    int branch_faults = 0;
    int load_switch_faults = 0;
};

/// Draws a scenario: `branch_faults` branches without replacement, each stuck
/// open with probability `open_prob` else closed; likewise load nodes. The
/// draw order (branches, branch coins, nodes, node coins) is part of the
/// reproducibility contract.
inline FaultScenario generate_scenario(const Network& net, std::uint64_t seed,
                                       FaultCounts counts, double open_prob = 0.5) {
    if (counts.branch_faults < 0 || counts.branch_faults > net.branch_count())
        throw NetworkError("branch fault count exceeds the branch population");
    auto loads = net.load_indices();
    if (counts.load_switch_faults < 0 ||
        counts.load_switch_faults > static_cast<int>(loads.size()))
        throw NetworkError("load-switch fault count exceeds the load population");

    Rng rng(seed);
    FaultScenario sc;
    sc.seed = seed;
    for (int pos : rng.sample_without_replacement(net.branch_count(), counts.branch_faults)) {
        int id = net.branch(pos).id;
        if (rng.next_unit() < open_prob)
            sc.faulted_open_branches.push_back(id);
        else
            sc.faulted_closed_branches.push_back(id);
    }
    for (int k : rng.sample_without_replacement(static_cast<int>(loads.size()),
                                                counts.load_switch_faults)) {
        int id = net.node(loads[k]).id;
        if (rng.next_unit() < open_prob)
            sc.faulted_open_nodes.push_back(id);
        else
            sc.faulted_closed_nodes.push_back(id);
    }
    for (auto* v : {&sc.faulted_open_branches, &sc.faulted_closed_branches,
                    &sc.faulted_open_nodes, &sc.faulted_closed_nodes})
        std::sort(v->begin(), v->end());
    validate_scenario(net, sc);
    return sc;
}

inline nlohmann::json scenario_to_json(const FaultScenario& sc) {
    return {{"seed", sc.seed},
            {"L_o", sc.faulted_open_branches},
            {"L_c", sc.faulted_closed_branches},
            {"N_o", sc.faulted_open_nodes},
            {"N_c", sc.faulted_closed_nodes},
            {"label", sc.label}};
}

inline FaultScenario scenario_from_json(const nlohmann::json& j, const Network& net) {
    if (!j.is_object()) throw SchemaError("scenario document must be an object");
    static const std::vector<std::string> allowed{"seed", "L_o", "L_c", "N_o", "N_c", "label"};
    for (const auto& [key, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw SchemaError("unknown scenario field '" + key + "'");
    for (const char* key : {"seed", "L_o", "L_c", "N_o", "N_c", "label"})
        if (!j.contains(key))
            throw SchemaError("scenario document is missing '" + std::string(key) + "'");
    FaultScenario sc;
    sc.seed = j["seed"].get<std::uint64_t>();
    sc.faulted_open_branches = j["L_o"].get<std::vector<int>>();
    sc.faulted_closed_branches = j["L_c"].get<std::vector<int>>();
    sc.faulted_open_nodes = j["N_o"].get<std::vector<int>>();
    sc.faulted_closed_nodes = j["N_c"].get<std::vector<int>>();
    sc.label = j["label"].get<std::string>();
    validate_scenario(net, sc);
    return sc;
}

} // namespace gridforest
