#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridforest/data_io.hpp"
#include "gridforest/errors.hpp"
#include "gridforest/mg_formation.hpp"
#include "gridforest/network.hpp"
#include "gridforest/rng.hpp"
#include "gridforest/scenario.hpp"
#include "gridforest/solver.hpp"

namespace gridforest {

struct BatchOptions {
    int min_branch_faults = 5;         // clamped to the branch count
    double max_branch_fault_frac = 0.8; // of the branch count
    double max_load_fault_frac = 0.2;   // of the load-node count
    double open_prob = 0.5;
    int workers = 0;                    // 0 = hardware concurrency, capped at 4
    std::string backend_config = "auto";
    SolveOptions solve;
};

struct BatchResult {
    std::vector<BatchRow> rows; // scenario-major, request order within a scenario
    nlohmann::json metadata;    // generator knobs, for reproducing the batch
};

namespace detail {

/// Draws the per-scenario fault load deterministically from the master seed:
/// a branch-fault count uniform on [min, 0.8|L|], a load-switch-fault count
/// uniform on [0, 0.2|loads|], and a fresh sub-seed for the scenario itself.
inline std::vector<FaultScenario> draw_scenarios(const Network& net, int n,
                                                 std::uint64_t seed,
                                                 const BatchOptions& opts) {
    const int branch_hi =
        std::max(1, static_cast<int>(opts.max_branch_fault_frac * net.branch_count()));
    const int branch_lo = std::min(opts.min_branch_faults, branch_hi);
    const int load_hi =
        static_cast<int>(opts.max_load_fault_frac * net.load_indices().size());
    Rng master(seed);
    std::vector<FaultScenario> scenarios;
    scenarios.reserve(n);
    for (int i = 0; i < n; ++i) {
        FaultCounts counts;
        counts.branch_faults = master.next_int(branch_lo, branch_hi);
        counts.load_switch_faults = load_hi > 0 ? master.next_int(0, load_hi) : 0;
        const std::uint64_t sub_seed = master.next_u64();
        scenarios.push_back(generate_scenario(net, sub_seed, counts, opts.open_prob));
        scenarios.back().label = "batch_" + std::to_string(i);
    }
    return scenarios;
}

} // namespace detail

/// Solves every requested model on every generated scenario. Failures of a
/// single solve are recorded in that row's status and never abort the batch.
/// Scenarios are distributed over a small worker pool, each worker owning its
/// own backend process; rows land in fixed scenario-major slots, so the
/// result is deterministic regardless of completion order.
inline BatchResult run_batch(const Network& net, int n_scenarios, std::uint64_t seed,
                             const std::vector<ModelVariant>& requests,
                             const BatchOptions& opts = {}) {
    if (n_scenarios < 0) throw ModelError("negative scenario count");
    if (requests.empty()) throw ModelError("batch needs at least one model request");

    const auto scenarios = detail::draw_scenarios(net, n_scenarios, seed, opts);
    const int per_scenario = static_cast<int>(requests.size());

    BatchResult result;
    result.rows.resize(static_cast<std::size_t>(n_scenarios) * per_scenario);

    int workers = opts.workers;
    if (workers <= 0)
        workers = std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
    workers = std::max(1, std::min(workers, std::max(1, n_scenarios)));

    std::atomic<int> next{0};
    auto worker = [&](SolverBackend& backend) {
        for (int i = next.fetch_add(1); i < n_scenarios; i = next.fetch_add(1)) {
            for (int j = 0; j < per_scenario; ++j) {
                const ModelVariant& variant = requests[j];
                BatchRow& row = result.rows[static_cast<std::size_t>(i) * per_scenario + j];
                row.scenario_index = i;
                row.seed = scenarios[i].seed;
                row.variant = to_string(variant.tag);
                row.radiality =
                    variant.tag == VariantTag::proposed ? variant.radiality : "-";
                try {
                    MgBuild build = build_mg_formation(net, scenarios[i], variant);
                    SolveOutcome out = backend.solve(build.model, opts.solve);
                    row.status = to_string(out.status);
                    row.nodes_explored = out.nodes_explored;
                    row.wall_ms = out.wall_ms;
                    if (out.status == SolveStatus::optimal) {
                        RestorationSolution sol =
                            extract_solution(net, build.handles, out);
                        row.restored_kw = restored_load(net, sol);
                        row.utilization = dg_utilization(net, sol);
                    }
                } catch (const Error&) {
                    row.status = "error";
                }
            }
        }
    };

    if (workers == 1) {
        SolverBackend backend(opts.backend_config);
        worker(backend);
    } else {
        std::vector<std::unique_ptr<SolverBackend>> backends;
        for (int w = 0; w < workers; ++w)
            backends.push_back(std::make_unique<SolverBackend>(opts.backend_config));
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] { worker(*backends[w]); });
        for (auto& t : pool) t.join();
    }

    const int branch_hi =
        std::max(1, static_cast<int>(opts.max_branch_fault_frac * net.branch_count()));
    result.metadata = {
        {"nodes", net.node_count()},
        {"branches", net.branch_count()},
        {"scenarios", n_scenarios},
        {"master_seed", seed},
        {"branch_faults",
         {{"min", std::min(opts.min_branch_faults, branch_hi)}, {"max", branch_hi}}},
        {"load_switch_faults",
         {{"min", 0},
          {"max", static_cast<int>(opts.max_load_fault_frac * net.load_indices().size())}}},
        {"open_prob", opts.open_prob},
    };
    nlohmann::json reqs = nlohmann::json::array();
    for (const auto& v : requests)
        reqs.push_back({{"variant", to_string(v.tag)},
                        {"radiality", v.tag == VariantTag::proposed ? v.radiality : "-"}});
    result.metadata["requests"] = reqs;
    return result;
}

struct StatLine {
    int count = 0;
    double avg = 0, stddev = 0, max = 0, median = 0, min = 0;
};

/// Population statistics with the lower median for even counts.
inline StatLine stat_line(std::vector<double> xs) {
    StatLine s;
    s.count = static_cast<int>(xs.size());
    if (xs.empty()) return s;
    std::sort(xs.begin(), xs.end());
    s.min = xs.front();
    s.max = xs.back();
    s.median = xs[(xs.size() - 1) / 2];
    double sum = 0;
    for (double x : xs) sum += x;
    s.avg = sum / s.count;
    double var = 0;
    for (double x : xs) var += (x - s.avg) * (x - s.avg);
    s.stddev = std::sqrt(var / s.count);
    return s;
}

struct GroupSummary {
    std::string variant, radiality;
    int total = 0, optimal = 0, infeasible = 0, errors = 0, other = 0;
    StatLine restored;    // over optimal rows
    StatLine utilization; // over optimal rows
    StatLine nodes;       // over rows that reported a node count
};

struct BatchSummary {
    std::vector<GroupSummary> groups; // sorted by (variant, radiality)
    int compared_scenarios = 0;       // scenarios solved by both fictitious layers
    int formulation_mismatches = 0;   // objective disagreements > 1e-6 relative
};

/// Per-(variant, radiality) statistics plus a cross-formulation agreement
/// check: on every scenario where the proposed model was solved to optimality
/// under both fictitious layers, the restored load must match to 1e-6
/// relative.
inline BatchSummary summarize(const std::vector<BatchRow>& rows) {
    BatchSummary out;
    std::map<std::pair<std::string, std::string>, std::vector<const BatchRow*>> by_group;
    for (const auto& r : rows) by_group[{r.variant, r.radiality}].push_back(&r);
    for (const auto& [key, group] : by_group) {
        GroupSummary g;
        g.variant = key.first;
        g.radiality = key.second;
        std::vector<double> restored, util, nodes;
        for (const BatchRow* r : group) {
            ++g.total;
            if (r->status == "optimal") {
                ++g.optimal;
                restored.push_back(r->restored_kw);
                util.push_back(r->utilization);
            } else if (r->status == "infeasible") {
                ++g.infeasible;
            } else if (r->status == "error") {
                ++g.errors;
            } else {
                ++g.other;
            }
            if (r->nodes_explored >= 0)
                nodes.push_back(static_cast<double>(r->nodes_explored));
        }
        g.restored = stat_line(std::move(restored));
        g.utilization = stat_line(std::move(util));
        g.nodes = stat_line(std::move(nodes));
        out.groups.push_back(std::move(g));
    }

    std::map<int, std::map<std::string, const BatchRow*>> proposed_by_scenario;
    for (const auto& r : rows)
        if (r.variant == "proposed" && r.status == "optimal")
            proposed_by_scenario[r.scenario_index][r.radiality] = &r;
    for (const auto& [idx, tags] : proposed_by_scenario) {
        if (tags.size() < 2) continue;
        ++out.compared_scenarios;
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (const auto& [tag, r] : tags) {
            lo = std::min(lo, r->restored_kw);
            hi = std::max(hi, r->restored_kw);
        }
        if (hi - lo > 1e-6 * std::max(1.0, hi)) ++out.formulation_mismatches;
    }
    return out;
}

struct NodeComparison {
    int less = 0, equal = 0, greater = 0; // nodes(tag_a) vs nodes(tag_b)
    int considered = 0;
};

/// Scenario-wise comparison of explored branch-and-bound nodes between two
/// fictitious-layer formulations of the proposed model.
inline NodeComparison compare_nodes(const std::vector<BatchRow>& rows,
                                    const std::string& tag_a, const std::string& tag_b) {
    std::map<int, std::pair<long long, long long>> per_scenario;
    for (const auto& r : rows) {
        if (r.variant != "proposed" || r.status != "optimal" || r.nodes_explored < 0)
            continue;
        auto& slot = per_scenario.try_emplace(r.scenario_index, -1, -1).first->second;
        if (r.radiality == tag_a) slot.first = r.nodes_explored;
        if (r.radiality == tag_b) slot.second = r.nodes_explored;
    }
    NodeComparison cmp;
    for (const auto& [idx, pair] : per_scenario) {
        if (pair.first < 0 || pair.second < 0) continue;
        ++cmp.considered;
        if (pair.first < pair.second)
            ++cmp.less;
        else if (pair.first == pair.second)
            ++cmp.equal;
        else
            ++cmp.greater;
    }
    return cmp;
}

inline std::string render_summary(const BatchSummary& s) {
    char buf[256];
    std::string out;
    out += "variant          radiality  total optimal infeas error |   restored avg"
           "      std      max      med      min\n";
    for (const auto& g : s.groups) {
        std::snprintf(buf, sizeof buf,
                      "%-16s %-9s %6d %7d %6d %5d | %14.4f %8.4f %8.4f %8.4f %8.4f\n",
                      g.variant.c_str(), g.radiality.c_str(), g.total, g.optimal,
                      g.infeasible, g.errors, g.restored.avg, g.restored.stddev,
                      g.restored.max, g.restored.median, g.restored.min);
        out += buf;
    }
    if (s.compared_scenarios > 0) {
        std::snprintf(buf, sizeof buf,
                      "formulation agreement: %d scenario(s) compared, %d mismatch(es)\n",
                      s.compared_scenarios, s.formulation_mismatches);
        out += buf;
    }
    return out;
}

inline std::string render_node_comparison(const NodeComparison& c, const std::string& tag_a,
                                          const std::string& tag_b) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "explored nodes, %s vs %s over %d scenario(s): fewer %d, equal %d, "
                  "more %d\n",
                  tag_a.c_str(), tag_b.c_str(), c.considered, c.less, c.equal, c.greater);
    return buf;
}

} // namespace gridforest
