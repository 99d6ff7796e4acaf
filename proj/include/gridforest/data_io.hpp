#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridforest/errors.hpp"
#include "gridforest/network.hpp"
#include "gridforest/scenario.hpp"

namespace gridforest {

namespace detail {

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << text;
    if (!out) throw SchemaError("short write to '" + path + "'");
}

inline void reject_unknown_fields(const nlohmann::json& obj,
                                  const std::vector<std::string>& allowed,
                                  const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw SchemaError("unknown field '" + key + "' in " + where);
}

inline double require_number(const nlohmann::json& obj, const char* key,
                             const std::string& where) {
    if (!obj.contains(key))
        throw SchemaError("missing field '" + std::string(key) + "' in " + where);
    if (!obj[key].is_number())
        throw SchemaError("field '" + std::string(key) + "' in " + where +
                          " must be a number");
    return obj[key].get<double>();
}

inline double optional_number(const nlohmann::json& obj, const char* key, double fallback,
                              const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw SchemaError("field '" + std::string(key) + "' in " + where +
                          " must be a number");
    return obj[key].get<double>();
}

} // namespace detail

/// Parses the strict network document. Impedances may be given in ohm or
/// per-unit (declared in the header); the returned Network is always
/// per-unit normalized. The full graph must be connected.
inline Network network_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("network document must be an object");
    detail::reject_unknown_fields(
        j, {"format", "version", "name", "description", "base", "units", "nodes", "branches"},
        "network document");
    if (j.value("format", "") != "gridforest-network")
        throw SchemaError("network document must declare format 'gridforest-network'");
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != 1)
        throw SchemaError("network document must declare version 1");
    if (!j.contains("base") || !j["base"].is_object())
        throw SchemaError("network document needs a 'base' object");
    detail::reject_unknown_fields(j["base"], {"kv", "mva"}, "base");
    const double base_kv = detail::require_number(j["base"], "kv", "base");
    const double base_mva = detail::require_number(j["base"], "mva", "base");
    if (!j.contains("units") || !j["units"].is_object())
        throw SchemaError("network document needs a 'units' object");
    detail::reject_unknown_fields(j["units"], {"impedance"}, "units");
    const std::string imp_unit = j["units"].value("impedance", "");
    if (imp_unit != "ohm" && imp_unit != "pu")
        throw SchemaError("units.impedance must be 'ohm' or 'pu'");
    const double z_scale = imp_unit == "ohm" ? base_mva / (base_kv * base_kv) : 1.0;

    if (!j.contains("nodes") || !j["nodes"].is_array() || j["nodes"].empty())
        throw SchemaError("network document needs a non-empty 'nodes' array");
    if (!j.contains("branches") || !j["branches"].is_array())
        throw SchemaError("network document needs a 'branches' array");

    std::vector<NodeRecord> nodes;
    for (const auto& nj : j["nodes"]) {
        if (!nj.is_object()) throw SchemaError("each node must be an object");
        const std::string where =
            "node " + (nj.contains("id") ? nj["id"].dump() : std::string("<no id>"));
        detail::reject_unknown_fields(nj,
                                      {"id", "kind", "p_kw", "q_kvar", "weight", "pcap_kw",
                                       "qcap_kvar", "vmin_pu", "vmax_pu"},
                                      where);
        if (!nj.contains("id") || !nj["id"].is_number_integer())
            throw SchemaError("every node needs an integer 'id'");
        if (!nj.contains("kind") || !nj["kind"].is_string())
            throw SchemaError("missing 'kind' in " + where);
        NodeRecord n;
        n.id = nj["id"].get<int>();
        n.kind = node_kind_from_string(nj["kind"].get<std::string>());
        n.p_demand_kw = detail::optional_number(nj, "p_kw", 0.0, where);
        n.q_demand_kvar = detail::optional_number(nj, "q_kvar", 0.0, where);
        n.weight = detail::optional_number(nj, "weight", 1.0, where);
        n.p_cap_kw = detail::optional_number(nj, "pcap_kw", 0.0, where);
        n.q_cap_kvar = detail::optional_number(nj, "qcap_kvar", 0.0, where);
        const double vmin = detail::optional_number(nj, "vmin_pu", 0.95, where);
        const double vmax = detail::optional_number(nj, "vmax_pu", 1.05, where);
        n.v_min_pu2 = vmin * vmin;
        n.v_max_pu2 = vmax * vmax;
        nodes.push_back(n);
    }

    std::vector<BranchRecord> branches;
    for (const auto& bj : j["branches"]) {
        if (!bj.is_object()) throw SchemaError("each branch must be an object");
        const std::string where =
            "branch " + (bj.contains("id") ? bj["id"].dump() : std::string("<no id>"));
        detail::reject_unknown_fields(
            bj, {"id", "from", "to", "r", "x", "scap_kva", "normally_open", "switchable"},
            where);
        for (const char* key : {"id", "from", "to"})
            if (!bj.contains(key) || !bj[key].is_number_integer())
                throw SchemaError("field '" + std::string(key) + "' in " + where +
                                  " must be an integer");
        BranchRecord b;
        b.id = bj["id"].get<int>();
        b.from = bj["from"].get<int>();
        b.to = bj["to"].get<int>();
        b.r_pu = detail::require_number(bj, "r", where) * z_scale;
        b.x_pu = detail::require_number(bj, "x", where) * z_scale;
        b.s_cap_kva = detail::require_number(bj, "scap_kva", where);
        if (bj.contains("normally_open")) {
            if (!bj["normally_open"].is_boolean())
                throw SchemaError("'normally_open' in " + where + " must be a boolean");
            b.normally_open = bj["normally_open"].get<bool>();
        }
        if (bj.contains("switchable")) {
            if (!bj["switchable"].is_boolean())
                throw SchemaError("'switchable' in " + where + " must be a boolean");
            b.switchable = bj["switchable"].get<bool>();
        }
        branches.push_back(b);
    }

    Network net(std::move(nodes), std::move(branches), base_kv, base_mva);
    if (!net.is_connected())
        throw NetworkError("network graph is disconnected");
    return net;
}

/// Canonical per-unit document for the network (keys sorted by the JSON
/// library, so serialization is byte-stable).
inline nlohmann::json network_to_json(const Network& net, const std::string& name = "",
                                      const std::string& description = "") {
    nlohmann::json j;
    j["format"] = "gridforest-network";
    j["version"] = 1;
    if (!name.empty()) j["name"] = name;
    if (!description.empty()) j["description"] = description;
    j["base"] = {{"kv", net.base_kv()}, {"mva", net.base_mva()}};
    j["units"] = {{"impedance", "pu"}};
    auto& nodes = j["nodes"] = nlohmann::json::array();
    for (const auto& n : net.nodes()) {
        nlohmann::json nj{{"id", n.id}, {"kind", to_string(n.kind)}};
        if (n.p_demand_kw != 0) nj["p_kw"] = n.p_demand_kw;
        if (n.q_demand_kvar != 0) nj["q_kvar"] = n.q_demand_kvar;
        if (n.weight != 1.0) nj["weight"] = n.weight;
        if (n.p_cap_kw != 0) nj["pcap_kw"] = n.p_cap_kw;
        if (n.q_cap_kvar != 0) nj["qcap_kvar"] = n.q_cap_kvar;
        nj["vmin_pu"] = std::sqrt(n.v_min_pu2);
        nj["vmax_pu"] = std::sqrt(n.v_max_pu2);
        nodes.push_back(std::move(nj));
    }
    auto& branches = j["branches"] = nlohmann::json::array();
    for (const auto& b : net.branches()) {
        nlohmann::json bj{{"id", b.id},       {"from", b.from},
                          {"to", b.to},       {"r", b.r_pu},
                          {"x", b.x_pu},      {"scap_kva", b.s_cap_kva}};
        if (b.normally_open) bj["normally_open"] = true;
        if (!b.switchable) bj["switchable"] = false;
        branches.push_back(std::move(bj));
    }
    return j;
}

inline Network load_network(const std::string& path) {
    try {
        return network_from_json(detail::read_json_file(path));
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline void save_network(const Network& net, const std::string& path,
                         const std::string& name = "", const std::string& description = "") {
    detail::write_text_file(path, network_to_json(net, name, description).dump(2) + "\n");
}

inline FaultScenario load_scenario(const std::string& path, const Network& net) {
    return scenario_from_json(detail::read_json_file(path), net);
}

inline void save_scenario(const FaultScenario& sc, const std::string& path) {
    detail::write_text_file(path, scenario_to_json(sc).dump(2) + "\n");
}

// ---- batch result tables ----------------------------------------------------

struct BatchRow {
    int scenario_index = 0;
    std::uint64_t seed = 0;
    std::string variant;
    std::string radiality;
    std::string status;            // optimal/infeasible/unbounded/limit/error
    double restored_kw = 0.0;      // meaningful when optimal
    double utilization = 0.0;      // dg capacity utilization, 0..1
    long long nodes_explored = -1; // -1 = unknown
    double wall_ms = 0.0;
};

inline std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::string batch_csv_header() {
    return "scenario,seed,variant,radiality,status,restored_kw,utilization,"
           "nodes_explored,wall_ms";
}

inline std::string batch_row_csv(const BatchRow& r) {
    std::string line = std::to_string(r.scenario_index) + "," + std::to_string(r.seed) +
                       "," + r.variant + "," + r.radiality + "," + r.status + ",";
    line += r.status == "optimal" ? csv_number(r.restored_kw) : "";
    line += ",";
    line += r.status == "optimal" ? csv_number(r.utilization) : "";
    line += ",";
    line += r.nodes_explored >= 0 ? std::to_string(r.nodes_explored) : "";
    line += ",";
    line += csv_number(r.wall_ms);
    return line;
}

inline void write_batch_csv(const std::vector<BatchRow>& rows, const std::string& path) {
    std::string text = batch_csv_header() + "\n";
    for (const auto& r : rows) text += batch_row_csv(r) + "\n";
    detail::write_text_file(path, text);
}

inline std::vector<BatchRow> read_batch_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty");
    if (line != batch_csv_header())
        throw SchemaError("'" + path + "' does not carry the batch table header");
    std::vector<BatchRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (cells.size() != 9)
            throw SchemaError(path + ":" + std::to_string(lineno) +
                              ": expected 9 columns, found " + std::to_string(cells.size()));
        try {
            BatchRow r;
            r.scenario_index = std::stoi(cells[0]);
            r.seed = std::stoull(cells[1]);
            r.variant = cells[2];
            r.radiality = cells[3];
            r.status = cells[4];
            r.restored_kw = cells[5].empty() ? 0.0 : std::stod(cells[5]);
            r.utilization = cells[6].empty() ? 0.0 : std::stod(cells[6]);
            r.nodes_explored = cells[7].empty() ? -1 : std::stoll(cells[7]);
            r.wall_ms = cells[8].empty() ? 0.0 : std::stod(cells[8]);
            rows.push_back(std::move(r));
        } catch (const std::exception&) {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": malformed row");
        }
    }
    return rows;
}

} // namespace gridforest
