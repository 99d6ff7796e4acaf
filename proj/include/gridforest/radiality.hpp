#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gridforest/errors.hpp"
#include "gridforest/milp.hpp"
#include "gridforest/network.hpp"
#include "gridforest/rng.hpp"
#include "gridforest/solver.hpp"

namespace gridforest {

/// Topology graph used by the connectivity layer. All substations collapse
/// into one root node; branch order and ids are preserved so selections map
/// 1:1 onto the original network's branches. Operational constraints keep
/// addressing the original nodes through `node_map`.
struct MergedTopology {
    Network topology;
    int root_index;            // dense index of the root in `topology`
    std::vector<int> node_map; // original dense node index -> merged dense index
};

inline MergedTopology merge_substations(const Network& net) {
    auto subs = net.substation_indices();
    if (subs.empty()) {
        // Fully islanded system: the fictitious tree still needs a root; use
        // the lowest-id DG. Nothing to merge.
        auto dgs = net.dg_indices();
        if (dgs.empty())
            throw NetworkError("no substation or dg node available as a connectivity root");
        int root = dgs[0];
        for (int d : dgs)
            if (net.node(d).id < net.node(root).id) root = d;
        std::vector<int> identity(net.node_count());
        for (int i = 0; i < net.node_count(); ++i) identity[i] = i;
        return {net, root, std::move(identity)};
    }

    const int keep = subs[0]; // merged root inherits the first substation's id
    std::vector<int> node_map(net.node_count(), -1);
    std::vector<NodeRecord> nodes;
    for (int i = 0; i < net.node_count(); ++i) {
        if (net.node(i).kind == NodeKind::substation && i != keep) continue;
        node_map[i] = static_cast<int>(nodes.size());
        nodes.push_back(net.node(i));
        if (i == keep) {
            // Power fields are meaningless on the fictitious layer.
            auto& root = nodes.back();
            root.p_demand_kw = root.q_demand_kvar = 0.0;
            root.p_cap_kw = root.q_cap_kvar = 0.0;
        }
    }
    for (int i = 0; i < net.node_count(); ++i)
        if (node_map[i] < 0) node_map[i] = node_map[keep];

    const int root_id = net.node(keep).id;
    std::vector<BranchRecord> branches;
    for (const auto& b : net.branches()) {
        BranchRecord nb = b;
        if (net.node(net.node_index(b.from)).kind == NodeKind::substation) nb.from = root_id;
        if (net.node(net.node_index(b.to)).kind == NodeKind::substation) nb.to = root_id;
        if (nb.from == nb.to)
            throw NetworkError("branch " + std::to_string(b.id) +
                               " connects two substations; it would be a self-loop "
                               "after merging");
        branches.push_back(nb);
    }
    Network merged(std::move(nodes), std::move(branches), net.base_kv(), net.base_mva());
    return {std::move(merged), node_map[keep], std::move(node_map)};
}

/// Variable handles of one radiality layer. Builders fill `beta`; the caller
/// supplies `alpha` (its operational branch binaries) before coupling.
struct RadialityHandles {
    std::string formulation; // "scf" or "dmcf"
    int root_index = -1;
    int root_id = 0;
    std::vector<VarId> beta;
    std::vector<VarId> alpha;
};

/// Single-commodity-flow spanning-tree layer: the root sends one fictitious
/// unit to every other node over branches opened by beta. Flow on a branch is
/// a forward/reverse pair of nonnegative variables, each capped by
/// (|N|-1)*beta. The root's balance row is implied by the others and is
/// omitted, giving exactly |N| + 2|L| rows and 3|L| columns.
inline RadialityHandles build_radiality_scf(MilpModel& model, const Network& topology,
                                            int root_index) {
    if (!topology.is_connected())
        throw GraphError("spanning-tree layer needs a connected topology graph");
    const int n = topology.node_count();
    const int L = topology.branch_count();
    const double cap = n - 1;
    RadialityHandles h;
    h.formulation = "scf";
    h.root_index = root_index;
    h.root_id = topology.node(root_index).id;

    std::vector<VarId> fwd(L), rev(L);
    for (int e = 0; e < L; ++e) {
        const std::string bid = std::to_string(topology.branch(e).id);
        h.beta.push_back(model.add_binary("beta_" + bid));
        fwd[e] = model.add_continuous("sflow_fwd_" + bid, 0.0, MilpModel::inf());
        rev[e] = model.add_continuous("sflow_rev_" + bid, 0.0, MilpModel::inf());
    }
    for (int i = 0; i < n; ++i) {
        if (i == root_index) continue;
        std::vector<LinTerm> terms;
        for (int e : topology.incident_branches(i)) {
            const bool entering_fwd = topology.to_index(e) == i;
            terms.push_back({entering_fwd ? fwd[e] : rev[e], 1.0});
            terms.push_back({entering_fwd ? rev[e] : fwd[e], -1.0});
        }
        model.add_constraint("sbal_" + std::to_string(topology.node(i).id),
                             std::move(terms), ConstraintSense::eq, 1.0);
    }
    for (int e = 0; e < L; ++e) {
        const std::string bid = std::to_string(topology.branch(e).id);
        model.add_constraint("scap_fwd_" + bid, {{fwd[e], 1.0}, {h.beta[e], -cap}},
                             ConstraintSense::le, 0.0);
        model.add_constraint("scap_rev_" + bid, {{rev[e], 1.0}, {h.beta[e], -cap}},
                             ConstraintSense::le, 0.0);
    }
    std::vector<LinTerm> card;
    for (VarId b : h.beta) card.push_back({b, 1.0});
    model.add_constraint("scard", std::move(card), ConstraintSense::eq, cap);
    return h;
}

/// Directed-multicommodity-flow spanning-tree layer: one unit commodity per
/// non-root node, routed from the root over directed arc picks lambda; arcs
/// are paired back into undirected beta. 2|N||L|+|L| columns and
/// |N|^2 + 2|N||L| - |N| - |L| + 1 rows; the LP relaxation is tight.
inline RadialityHandles build_radiality_dmcf(MilpModel& model, const Network& topology,
                                             int root_index) {
    if (!topology.is_connected())
        throw GraphError("spanning-tree layer needs a connected topology graph");
    const int n = topology.node_count();
    const int L = topology.branch_count();
    RadialityHandles h;
    h.formulation = "dmcf";
    h.root_index = root_index;
    h.root_id = topology.node(root_index).id;

    std::vector<VarId> lam_fwd(L), lam_rev(L);
    for (int e = 0; e < L; ++e) {
        const std::string bid = std::to_string(topology.branch(e).id);
        h.beta.push_back(model.add_binary("beta_" + bid));
        lam_fwd[e] = model.add_binary("lam_fwd_" + bid);
        lam_rev[e] = model.add_binary("lam_rev_" + bid);
    }
    // flows[k][2e] rides branch e from->to for commodity k, flows[k][2e+1] the
    // reverse arc. Commodities are indexed by merged node, skipping the root.
    std::vector<std::vector<VarId>> flows(n);
    for (int k = 0; k < n; ++k) {
        if (k == root_index) continue;
        flows[k].resize(2 * L);
        const std::string kid = std::to_string(topology.node(k).id);
        for (int e = 0; e < L; ++e) {
            const std::string bid = std::to_string(topology.branch(e).id);
            flows[k][2 * e] = model.add_continuous("dflow_k" + kid + "_" + bid + "_fwd",
                                                   0.0, MilpModel::inf());
            flows[k][2 * e + 1] = model.add_continuous("dflow_k" + kid + "_" + bid + "_rev",
                                                       0.0, MilpModel::inf());
        }
    }
    for (int k = 0; k < n; ++k) {
        if (k == root_index) continue;
        const std::string kid = std::to_string(topology.node(k).id);
        for (int i = 0; i < n; ++i) {
            std::vector<LinTerm> terms;
            for (int e : topology.incident_branches(i)) {
                const bool at_from = topology.from_index(e) == i;
                terms.push_back({flows[k][2 * e + (at_from ? 0 : 1)], 1.0});  // leaving i
                terms.push_back({flows[k][2 * e + (at_from ? 1 : 0)], -1.0}); // entering i
            }
            const double rhs = i == root_index ? 1.0 : (i == k ? -1.0 : 0.0);
            model.add_constraint("dbal_k" + kid + "_" + std::to_string(topology.node(i).id),
                                 std::move(terms), ConstraintSense::eq, rhs);
        }
        for (int e = 0; e < L; ++e) {
            const std::string bid = std::to_string(topology.branch(e).id);
            model.add_constraint("dcap_k" + kid + "_" + bid + "_fwd",
                                 {{flows[k][2 * e], 1.0}, {lam_fwd[e], -1.0}},
                                 ConstraintSense::le, 0.0);
            model.add_constraint("dcap_k" + kid + "_" + bid + "_rev",
                                 {{flows[k][2 * e + 1], 1.0}, {lam_rev[e], -1.0}},
                                 ConstraintSense::le, 0.0);
        }
    }
    std::vector<LinTerm> card;
    for (int e = 0; e < L; ++e) {
        card.push_back({lam_fwd[e], 1.0});
        card.push_back({lam_rev[e], 1.0});
    }
    model.add_constraint("dcard", std::move(card), ConstraintSense::eq, n - 1);
    for (int e = 0; e < L; ++e)
        model.add_constraint("dundir_" + std::to_string(topology.branch(e).id),
                             {{lam_fwd[e], 1.0}, {lam_rev[e], 1.0}, {h.beta[e], -1.0}},
                             ConstraintSense::eq, 0.0);
    return h;
}

/// The subgraph coupling: each operational branch pick stays under its
/// fictitious counterpart, so integer-feasible alpha vectors are exactly the
/// spanning forests.
inline void add_subgraph_coupling(MilpModel& model, const RadialityHandles& h) {
    if (h.alpha.size() != h.beta.size())
        throw ModelError("coupling needs one alpha per beta variable");
    for (std::size_t e = 0; e < h.beta.size(); ++e) {
        const auto& bname = model.variable(h.beta[e]).name; // validates the id
        if (bname.rfind("beta_", 0) != 0)
            throw ModelError("handle does not point at a fictitious-layer variable");
        model.add_constraint("couple_" + bname.substr(5),
                             {{h.alpha[e], 1.0}, {h.beta[e], -1.0}}, ConstraintSense::le,
                             0.0);
    }
}

/// Exhausts every 0/1 assignment of `vars` and keeps those for which the
/// model stays feasible. The model is loaded once; assignments are pinned
/// through bounds backend-side.
inline std::vector<EdgeSelection> integer_feasible_selections(
    SolverBackend& backend, const MilpModel& model, const std::vector<VarId>& vars,
    SelectionRole role) {
    if (vars.size() > 20)
        throw GraphError("feasible-set enumeration limited to 20 binaries, got " +
                         std::to_string(vars.size()));
    backend.load(model);
    auto masks = backend.feasible_grid(vars);
    std::vector<EdgeSelection> out;
    for (std::uint64_t m : masks)
        out.push_back(EdgeSelection::from_mask(static_cast<int>(vars.size()), m, role));
    return out;
}

/// Integer-feasible beta set of a spanning-tree layer built standalone.
inline std::vector<EdgeSelection> integer_feasible_beta_set(SolverBackend& backend,
                                                            const Network& topology,
                                                            int root_index,
                                                            const std::string& formulation) {
    MilpModel model;
    RadialityHandles h = formulation == "dmcf"
                             ? build_radiality_dmcf(model, topology, root_index)
                             : build_radiality_scf(model, topology, root_index);
    return integer_feasible_selections(backend, model, h.beta, SelectionRole::fictitious);
}

/// Integer-feasible alpha set once the coupling is added on top.
inline std::vector<EdgeSelection> integer_feasible_alpha_set(SolverBackend& backend,
                                                             const Network& topology,
                                                             int root_index,
                                                             const std::string& formulation) {
    MilpModel model;
    RadialityHandles h = formulation == "dmcf"
                             ? build_radiality_dmcf(model, topology, root_index)
                             : build_radiality_scf(model, topology, root_index);
    for (int e = 0; e < topology.branch_count(); ++e)
        h.alpha.push_back(
            model.add_binary("alpha_" + std::to_string(topology.branch(e).id)));
    add_subgraph_coupling(model, h);
    return integer_feasible_selections(backend, model, h.alpha, SelectionRole::actual);
}

struct LpProbeResult {
    int trials = 0;
    bool all_integral = true;
    double worst_deviation = 0.0;        // max distance of any probed coordinate to {0,1}
    std::vector<EdgeSelection> rounded;  // one per trial
};

/// Solves the LP relaxation under `trials` random dense objectives over the
/// probed coordinates (maximization, coefficients in [-1, 1]). A fractional
/// vertex that is optimal for any direction will be exposed with probability
/// one; vertex solutions are guaranteed by the simplex-based LP path.
inline LpProbeResult lp_random_objective_probe(SolverBackend& backend,
                                               const MilpModel& model,
                                               const std::vector<VarId>& coords,
                                               SelectionRole role, int trials,
                                               std::uint64_t seed, double tol = 1e-6) {
    MilpModel relaxed = lp_relaxation(model);
    Rng rng(seed);
    LpProbeResult result;
    result.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::vector<LinTerm> obj;
        for (VarId v : coords) obj.push_back({v, rng.next_unit() * 2.0 - 1.0});
        relaxed.set_objective(ObjectiveSense::maximize, std::move(obj));
        auto out = backend.solve(relaxed);
        if (out.status != SolveStatus::optimal)
            throw SolverError("relaxation probe " + std::to_string(t) + " ended " +
                              std::string(to_string(out.status)));
        EdgeSelection sel(static_cast<int>(coords.size()),
                          role); // probed coords are per-branch
        for (std::size_t i = 0; i < coords.size(); ++i) {
            const double x = out.values[coords[i]];
            const double dev = std::fabs(x - std::round(x));
            result.worst_deviation = std::max(result.worst_deviation, dev);
            if (dev > tol) result.all_integral = false;
            sel.set(static_cast<int>(i), std::round(x) >= 0.5);
        }
        result.rounded.push_back(std::move(sel));
    }
    return result;
}

} // namespace gridforest
