#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridforest/data_io.hpp"
#include "gridforest/graph_oracles.hpp"
#include "gridforest/harness.hpp"
#include "gridforest/mg_formation.hpp"
#include "gridforest/radiality.hpp"
#include "gridforest/solver.hpp"

namespace {

using namespace gridforest;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string selection_line(const Network& net, const EdgeSelection& sel) {
    std::string line;
    for (int e = 0; e < net.branch_count(); ++e) {
        if (!sel.test(e)) continue;
        if (!line.empty()) line += ",";
        line += std::to_string(net.branch(e).id);
    }
    return line.empty() ? "(empty)" : line;
}

int run_solve(const std::string& net_path, const std::string& scenario_path,
              const std::string& variant_name, const std::string& radiality,
              double time_limit, const std::string& out_path) {
    Network net = load_network(net_path);
    FaultScenario scenario;
    if (!scenario_path.empty()) scenario = load_scenario(scenario_path, net);

    ModelVariant variant;
    variant.tag = variant_from_string(variant_name);
    variant.radiality = radiality;

    SolverBackend backend;
    MgBuild build = build_mg_formation(net, scenario, variant);
    SolveOptions opts;
    opts.time_limit_s = time_limit;
    SolveOutcome outcome = backend.solve(build.model, opts);

    if (outcome.status != SolveStatus::optimal) {
        std::cerr << "no optimal reconfiguration: solver reports "
                  << to_string(outcome.status) << "\n";
        return outcome.status == SolveStatus::infeasible ? kExitInfeasible : kExitError;
    }

    RestorationSolution sol = extract_solution(net, build.handles, outcome);
    nlohmann::json doc = solution_to_json(net, sol);
    doc["variant"] = to_string(variant.tag);
    doc["radiality"] = variant.tag == VariantTag::proposed ? variant.radiality : "-";
    doc["nodes_explored"] = outcome.nodes_explored;
    doc["wall_ms"] = outcome.wall_ms;
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw SchemaError("cannot write '" + out_path + "'");
        out << text;
    }
    std::fprintf(stderr, "restored %.6g kW of %.6g kW across %zu component(s)\n",
                 restored_load(net, sol), net.total_demand_kw(), sol.components.size());
    return kExitOk;
}

int run_batch_cmd(const std::string& net_path, int n, std::uint64_t seed,
                  const std::vector<std::string>& variant_names,
                  const std::vector<std::string>& radiality_tags, int workers,
                  double time_limit, const std::string& out_path) {
    Network net = load_network(net_path);
    std::vector<ModelVariant> requests;
    for (const auto& vn : variant_names) {
        ModelVariant v;
        v.tag = variant_from_string(vn);
        if (v.tag == VariantTag::proposed) {
            for (const auto& tag : radiality_tags) {
                v.radiality = tag;
                requests.push_back(v);
            }
        } else {
            requests.push_back(v);
        }
    }

    BatchOptions opts;
    opts.workers = workers;
    opts.solve.time_limit_s = time_limit;
    BatchResult result = run_batch(net, n, seed, requests, opts);
    write_batch_csv(result.rows, out_path);
    std::ofstream meta(out_path + ".meta.json");
    if (!meta) throw SchemaError("cannot write '" + out_path + ".meta.json'");
    meta << result.metadata.dump(2) << "\n";

    BatchSummary summary = summarize(result.rows);
    std::cout << render_summary(summary);
    NodeComparison cmp = compare_nodes(result.rows, "scf", "dmcf");
    if (cmp.considered > 0) std::cout << render_node_comparison(cmp, "scf", "dmcf");
    std::cout << "wrote " << result.rows.size() << " row(s) to " << out_path << "\n";
    return kExitOk;
}

int run_oracle(const std::string& mode, const std::string& net_path) {
    Network net = load_network(net_path);
    if (mode == "count") {
        std::cout << count_spanning_trees(net) << "\n";
        return kExitOk;
    }
    const auto selections =
        mode == "trees" ? enumerate_spanning_trees(net) : enumerate_spanning_forests(net);
    for (const auto& sel : selections) std::cout << selection_line(net, sel) << "\n";
    std::cout << "count " << selections.size() << "\n";
    return kExitOk;
}

int run_lp_test(const std::string& net_path, const std::string& radiality, int trials) {
    Network net = load_network(net_path);
    MergedTopology merged = merge_substations(net);
    SolverBackend backend;

    MilpModel beta_model;
    RadialityHandles bh =
        radiality == "dmcf"
            ? build_radiality_dmcf(beta_model, merged.topology, merged.root_index)
            : build_radiality_scf(beta_model, merged.topology, merged.root_index);
    LpProbeResult beta = lp_random_objective_probe(backend, beta_model, bh.beta,
                                                   SelectionRole::fictitious, trials, 7);

    MilpModel alpha_model;
    RadialityHandles ah =
        radiality == "dmcf"
            ? build_radiality_dmcf(alpha_model, merged.topology, merged.root_index)
            : build_radiality_scf(alpha_model, merged.topology, merged.root_index);
    for (int e = 0; e < merged.topology.branch_count(); ++e)
        ah.alpha.push_back(alpha_model.add_binary(
            "alpha_" + std::to_string(merged.topology.branch(e).id)));
    add_subgraph_coupling(alpha_model, ah);
    LpProbeResult alpha = lp_random_objective_probe(backend, alpha_model, ah.alpha,
                                                    SelectionRole::actual, trials, 8);

    std::printf("%s fictitious layer, %d random objectives:\n", radiality.c_str(), trials);
    std::printf("  tree polytope:   all integral: %s, worst deviation %.3e\n",
                beta.all_integral ? "yes" : "no", beta.worst_deviation);
    std::printf("  forest polytope: all integral: %s, worst deviation %.3e\n",
                alpha.all_integral ? "yes" : "no", alpha.worst_deviation);
    return kExitOk;
}

int run_summarize(const std::string& csv_path) {
    const std::vector<BatchRow> rows = read_batch_csv(csv_path);
    BatchSummary summary = summarize(rows);
    std::cout << render_summary(summary);
    NodeComparison cmp = compare_nodes(rows, "scf", "dmcf");
    if (cmp.considered > 0) std::cout << render_node_comparison(cmp, "scf", "dmcf");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridforest: resilient distribution-network reconfiguration toolkit"};
    app.require_subcommand(1);

    std::string net_path, scenario_path, out_path, csv_path;
    std::string variant_name = "proposed", radiality = "scf", oracle_mode;
    std::vector<std::string> variant_names{"proposed"}, radiality_tags{"scf"};
    int n = 0, trials = 100, workers = 0;
    std::uint64_t seed = 1;
    double time_limit = 0.0;

    CLI::App* solve = app.add_subcommand("solve", "Solve one restoration scenario");
    solve->add_option("--net", net_path, "network JSON file")->required();
    solve->add_option("--scenario", scenario_path, "fault-scenario JSON file");
    solve->add_option("--variant", variant_name,
                      "proposed | fixed_islands | radial_baseline");
    solve->add_option("--radiality", radiality, "scf | dmcf (proposed variant only)");
    solve->add_option("--time-limit", time_limit, "solver time limit in seconds");
    solve->add_option("--out", out_path, "write the solution JSON here instead of stdout");

    CLI::App* batch = app.add_subcommand("batch", "Run a seeded batch of fault scenarios");
    batch->add_option("--net", net_path, "network JSON file")->required();
    batch->add_option("--n", n, "number of scenarios")->required();
    batch->add_option("--seed", seed, "master seed");
    batch->add_option("--variants", variant_names, "comma-separated variant list")
        ->delimiter(',');
    batch->add_option("--radiality", radiality_tags,
                      "comma-separated fictitious-layer tags for the proposed variant")
        ->delimiter(',');
    batch->add_option("--workers", workers, "worker pool size (0 = auto)");
    batch->add_option("--time-limit", time_limit, "per-solve time limit in seconds");
    batch->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "Brute-force topology oracles");
    oracle->add_option("mode", oracle_mode, "trees | forests | count")
        ->required()
        ->check(CLI::IsMember({"trees", "forests", "count"}));
    oracle->add_option("--net", net_path, "network JSON file")->required();

    CLI::App* lp_test = app.add_subcommand(
        "lp-test", "Probe LP-relaxation integrality with random objectives");
    lp_test->add_option("--net", net_path, "network JSON file")->required();
    lp_test->add_option("--radiality", radiality, "scf | dmcf");
    lp_test->add_option("--trials", trials, "number of random objectives");

    CLI::App* summarize_cmd =
        app.add_subcommand("summarize", "Summarize a batch CSV into tables");
    summarize_cmd->add_option("--csv", csv_path, "batch CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse diagnostic
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (solve->parsed())
            return run_solve(net_path, scenario_path, variant_name, radiality, time_limit,
                             out_path);
        if (batch->parsed())
            return run_batch_cmd(net_path, n, seed, variant_names, radiality_tags, workers,
                                 time_limit, out_path);
        if (oracle->parsed()) return run_oracle(oracle_mode, net_path);
        if (lp_test->parsed()) return run_lp_test(net_path, radiality, trials);
        if (summarize_cmd->parsed()) return run_summarize(csv_path);
    } catch (const Error& e) {
        std::cerr << "gridforest: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "gridforest: unexpected failure: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
