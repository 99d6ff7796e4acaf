#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridforest/errors.hpp"
#include "gridforest/graph_oracles.hpp"
#include "gridforest/linearize.hpp"
#include "gridforest/milp.hpp"
#include "gridforest/network.hpp"
#include "gridforest/radiality.hpp"
#include "gridforest/scenario.hpp"
#include "gridforest/solver.hpp"

namespace gridforest {

/// The three restoration models under comparison. `proposed` couples the
/// operational topology to a fictitious spanning tree and lets islands stay
/// dark; the two island-assignment variants pin every node to exactly one
/// source, so unenergized islands render them infeasible.
enum class VariantTag { proposed, fixed_islands, radial_baseline };

inline std::string to_string(VariantTag t) {
    switch (t) {
        case VariantTag::proposed: return "proposed";
        case VariantTag::fixed_islands: return "fixed_islands";
        case VariantTag::radial_baseline: return "radial_baseline";
    }
    throw ModelError("unknown variant tag");
}

inline VariantTag variant_from_string(const std::string& s) {
    if (s == "proposed") return VariantTag::proposed;
    if (s == "fixed_islands") return VariantTag::fixed_islands;
    if (s == "radial_baseline") return VariantTag::radial_baseline;
    throw ModelError("unknown variant '" + s + "'");
}

struct ModelVariant {
    VariantTag tag = VariantTag::proposed;
    std::string radiality = "scf"; // fictitious-layer formulation; proposed only
    int polygon_segments = 12;
    double big_m_override = 0.0; // 0 = derive per branch from boxes and capacity
};

/// Smallest constant that deactivates the voltage-drop equation of an open
/// branch: the widest possible voltage spread plus the largest drop any
/// in-capacity flow could produce on this branch.
inline double distflow_big_m(const Network& net, const BranchRecord& b) {
    double v_hi = 0.0, v_lo = std::numeric_limits<double>::infinity();
    for (const auto& nd : net.nodes()) {
        v_hi = std::max(v_hi, nd.v_max_pu2);
        v_lo = std::min(v_lo, nd.v_min_pu2);
    }
    const double s_pu = b.s_cap_kva / net.base_kw();
    return (v_hi - v_lo) + 2.0 * (b.r_pu + b.x_pu) * s_pu;
}

/// Variable handles of one restoration model. Vectors are indexed by network
/// node/branch position; -1 marks nodes without that variable (no demand, or
/// not a source). `eps` is empty for the island-assignment variants, whose
/// nodes are all energized by construction.
struct MgHandles {
    ModelVariant variant;
    FaultScenario scenario;
    int merged_root_id = -1; // proposed only
    std::vector<VarId> alpha;
    std::vector<VarId> delta;
    std::vector<VarId> eps;
    std::vector<VarId> v;
    std::vector<VarId> pflow, qflow;
    std::vector<VarId> pgen, qgen;
};

struct MgBuild {
    MilpModel model;
    MgHandles handles;
};

namespace detail {

/// Island-assignment layer shared by fixed_islands and radial_baseline: one
/// assignment binary per (node, source), every node assigned to exactly one
/// source, closed branches force equal assignment, and a per-source
/// connectivity flow feeds each node from its source. Together with the
/// closed-branch count |N| - |K| this makes the closed subgraph a spanning
/// forest of exactly one tree per source.
inline void add_island_assignment(MilpModel& m, const Network& net,
                                  const std::vector<VarId>& alpha) {
    const auto sources = net.source_indices();
    if (sources.empty())
        throw ModelError("island assignment needs at least one source node");
    const int n = net.node_count();
    const int L = net.branch_count();
    const double cap = n - 1;
    auto nid = [&](int i) { return std::to_string(net.node(i).id); };
    auto bid = [&](int e) { return std::to_string(net.branch(e).id); };

    std::vector<std::vector<VarId>> y(n);
    for (int i = 0; i < n; ++i)
        for (int k : sources) y[i].push_back(m.add_binary("y_" + nid(i) + "_" + nid(k)));
    for (std::size_t p = 0; p < sources.size(); ++p) m.fix_var(y[sources[p]][p], 1.0);

    for (int i = 0; i < n; ++i) {
        std::vector<LinTerm> one;
        for (VarId id : y[i]) one.push_back({id, 1.0});
        m.add_constraint("assign_one_" + nid(i), std::move(one), ConstraintSense::eq, 1.0);
    }
    for (int e = 0; e < L; ++e) {
        const int fi = net.from_index(e), ti = net.to_index(e);
        for (std::size_t p = 0; p < sources.size(); ++p) {
            const std::string tail = bid(e) + "_k" + nid(sources[p]);
            m.add_constraint("assign_eq_a_" + tail,
                             {{y[fi][p], 1.0}, {y[ti][p], -1.0}, {alpha[e], 1.0}},
                             ConstraintSense::le, 1.0);
            m.add_constraint("assign_eq_b_" + tail,
                             {{y[ti][p], 1.0}, {y[fi][p], -1.0}, {alpha[e], 1.0}},
                             ConstraintSense::le, 1.0);
        }
    }

    for (std::size_t p = 0; p < sources.size(); ++p) {
        const int k = sources[p];
        std::vector<VarId> fwd(L), rev(L);
        for (int e = 0; e < L; ++e) {
            const std::string tail = "k" + nid(k) + "_" + bid(e);
            fwd[e] = m.add_continuous("yflow_" + tail + "_fwd", 0.0, MilpModel::inf());
            rev[e] = m.add_continuous("yflow_" + tail + "_rev", 0.0, MilpModel::inf());
            m.add_constraint("ycap_" + tail + "_fwd", {{fwd[e], 1.0}, {alpha[e], -cap}},
                             ConstraintSense::le, 0.0);
            m.add_constraint("ycap_" + tail + "_rev", {{rev[e], 1.0}, {alpha[e], -cap}},
                             ConstraintSense::le, 0.0);
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            std::vector<LinTerm> terms;
            for (int e : net.incident_branches(i)) {
                const bool entering_fwd = net.to_index(e) == i;
                terms.push_back({entering_fwd ? fwd[e] : rev[e], 1.0});
                terms.push_back({entering_fwd ? rev[e] : fwd[e], -1.0});
            }
            terms.push_back({y[i][p], -1.0});
            m.add_constraint("ybal_k" + nid(k) + "_" + nid(i), std::move(terms),
                             ConstraintSense::eq, 0.0);
        }
    }

    std::vector<LinTerm> card;
    for (VarId a : alpha) card.push_back({a, 1.0});
    m.add_constraint("island_card", std::move(card), ConstraintSense::eq,
                     static_cast<double>(n - static_cast<int>(sources.size())));
}

} // namespace detail

/// Builds the restoration MILP for one fault scenario. Powers are modeled in
/// per-unit, voltages as squared magnitudes; the objective stays in weighted
/// kW. Fault fixings enter as named equality rows (not bounds) so that
/// contradictory requirements — e.g. a tie branch stuck closed under the
/// radial baseline — surface as infeasibility instead of silently
/// overwriting each other.
inline MgBuild build_mg_formation(const Network& net, const FaultScenario& scenario,
                                  const ModelVariant& variant) {
    validate_scenario(net, scenario);
    if (variant.radiality != "scf" && variant.radiality != "dmcf")
        throw ModelError("unknown radiality formulation '" + variant.radiality + "'");

    const int n = net.node_count();
    const int L = net.branch_count();
    const double base = net.base_kw();
    auto nid = [&](int i) { return std::to_string(net.node(i).id); };
    auto bid = [&](int e) { return std::to_string(net.branch(e).id); };

    MgBuild out;
    MilpModel& m = out.model;
    MgHandles& h = out.handles;
    h.variant = variant;
    h.scenario = scenario;

    for (int e = 0; e < L; ++e) h.alpha.push_back(m.add_binary("alpha_" + bid(e)));

    // Topology layer. The proposed model keeps the operational picks under a
    // fictitious spanning tree built on the substation-merged graph, which is
    // also what confines each component to at most one substation.
    if (variant.tag == VariantTag::proposed) {
        MergedTopology merged = merge_substations(net);
        RadialityHandles rh =
            variant.radiality == "dmcf"
                ? build_radiality_dmcf(m, merged.topology, merged.root_index)
                : build_radiality_scf(m, merged.topology, merged.root_index);
        rh.alpha = h.alpha;
        add_subgraph_coupling(m, rh);
        h.merged_root_id = rh.root_id;
    } else {
        if (variant.tag == VariantTag::radial_baseline) {
            EdgeSelection closed(L, SelectionRole::actual);
            for (int e = 0; e < L; ++e)
                if (!net.branch(e).normally_open) closed.set(e, true);
            if (!is_spanning_tree(net, closed))
                throw ModelError("radial baseline requires the normally-closed branches "
                                 "to form a spanning tree");
            for (int e = 0; e < L; ++e)
                if (net.branch(e).normally_open)
                    m.add_constraint("tie_open_" + bid(e), {{h.alpha[e], 1.0}},
                                     ConstraintSense::eq, 0.0);
        }
        detail::add_island_assignment(m, net, h.alpha);
    }

    // Load pickup binaries exist only where there is demand to pick up.
    for (int i = 0; i < n; ++i) {
        const auto& nd = net.node(i);
        const bool has_demand = nd.p_demand_kw > 0 || nd.q_demand_kvar > 0;
        h.delta.push_back(has_demand ? m.add_binary("delta_" + nid(i)) : -1);
    }

    // Energization status and its propagation (proposed only): a node is
    // energized iff some closed branch ties it to an energized neighbor.
    // The epsilon*alpha products are exact McCormick linearizations.
    if (variant.tag == VariantTag::proposed) {
        for (int i = 0; i < n; ++i) h.eps.push_back(m.add_binary("eps_" + nid(i)));
        for (int i = 0; i < n; ++i)
            if (net.node(i).is_source()) m.fix_var(h.eps[i], 1.0);
        for (int i = 0; i < n; ++i) {
            if (net.node(i).is_source()) continue;
            std::vector<VarId> z;
            for (int e : net.incident_branches(i)) {
                const int j = net.other_end(e, i);
                z.push_back(mccormick_binary_product(m, h.eps[j], h.alpha[e],
                                                     "z_" + bid(e) + "_at_" + nid(i)));
            }
            const double deg = static_cast<double>(net.degree(i));
            std::vector<LinTerm> lo, hi;
            for (VarId zi : z) {
                lo.push_back({zi, 1.0});
                hi.push_back({zi, -1.0});
            }
            lo.push_back({h.eps[i], -deg});
            hi.push_back({h.eps[i], 1.0});
            m.add_constraint("energize_lo_" + nid(i), std::move(lo), ConstraintSense::le,
                             0.0);
            m.add_constraint("energize_hi_" + nid(i), std::move(hi), ConstraintSense::le,
                             0.0);
        }
        // Valid strengthening: a load can only be served at an energized
        // node. Integer solutions already satisfy this through the balance
        // equations (a dark component has no injections), but stating it
        // linearly keeps the LP relaxation from serving load at nearly-dark
        // nodes and shrinks the search tree considerably.
        for (int i = 0; i < n; ++i)
            if (h.delta[i] >= 0 && !net.node(i).is_source())
                m.add_constraint("pickup_gate_" + nid(i),
                                 {{h.delta[i], 1.0}, {h.eps[i], -1.0}},
                                 ConstraintSense::le, 0.0);
    }

    // Electrical variables: squared voltage per node, injections on sources
    // (absent elsewhere, which is the zero-injection rule), directed branch
    // flows bounded by apparent-power capacity.
    for (int i = 0; i < n; ++i) {
        const auto& nd = net.node(i);
        h.v.push_back(m.add_continuous("v_" + nid(i), nd.v_min_pu2, nd.v_max_pu2));
        if (nd.is_source()) {
            h.pgen.push_back(m.add_continuous("pgen_" + nid(i), 0.0, nd.p_cap_kw / base));
            h.qgen.push_back(
                m.add_continuous("qgen_" + nid(i), 0.0, nd.q_cap_kvar / base));
        } else {
            h.pgen.push_back(-1);
            h.qgen.push_back(-1);
        }
    }
    for (int e = 0; e < L; ++e) {
        const double s_pu = net.branch(e).s_cap_kva / base;
        h.pflow.push_back(m.add_continuous("pflow_" + bid(e), -s_pu, s_pu));
        h.qflow.push_back(m.add_continuous("qflow_" + bid(e), -s_pu, s_pu));
    }

    // Nodal real/reactive balance with demand gated by the pickup binary.
    for (int i = 0; i < n; ++i) {
        const auto& nd = net.node(i);
        std::vector<LinTerm> pt, qt;
        if (h.pgen[i] >= 0) {
            pt.push_back({h.pgen[i], 1.0});
            qt.push_back({h.qgen[i], 1.0});
        }
        if (h.delta[i] >= 0) {
            pt.push_back({h.delta[i], -nd.p_demand_kw / base});
            qt.push_back({h.delta[i], -nd.q_demand_kvar / base});
        }
        for (int e : net.incident_branches(i)) {
            const double sgn = net.to_index(e) == i ? 1.0 : -1.0;
            pt.push_back({h.pflow[e], sgn});
            qt.push_back({h.qflow[e], sgn});
        }
        m.add_constraint("pbal_" + nid(i), std::move(pt), ConstraintSense::eq, 0.0);
        m.add_constraint("qbal_" + nid(i), std::move(qt), ConstraintSense::eq, 0.0);
    }

    // Linearized DistFlow voltage drop, active only on closed branches, and
    // the polygonal apparent-power gate that also pins open branches to zero
    // flow.
    for (int e = 0; e < L; ++e) {
        const auto& b = net.branch(e);
        const double M =
            variant.big_m_override > 0 ? variant.big_m_override : distflow_big_m(net, b);
        const int fi = net.from_index(e), ti = net.to_index(e);
        m.add_constraint("vdrop_lo_" + bid(e),
                         {{h.v[fi], 1.0},
                          {h.v[ti], -1.0},
                          {h.pflow[e], -2.0 * b.r_pu},
                          {h.qflow[e], -2.0 * b.x_pu},
                          {h.alpha[e], -M}},
                         ConstraintSense::ge, -M);
        m.add_constraint("vdrop_hi_" + bid(e),
                         {{h.v[fi], 1.0},
                          {h.v[ti], -1.0},
                          {h.pflow[e], -2.0 * b.r_pu},
                          {h.qflow[e], -2.0 * b.x_pu},
                          {h.alpha[e], M}},
                         ConstraintSense::le, M);
        polygonal_capacity_cuts(m, h.pflow[e], h.qflow[e], b.s_cap_kva / base, h.alpha[e],
                                "scap_" + bid(e), variant.polygon_segments);
    }

    // Fault fixings as equality rows.
    for (int id : scenario.faulted_open_branches)
        m.add_constraint("fault_open_" + std::to_string(id),
                         {{h.alpha[net.branch_index(id)], 1.0}}, ConstraintSense::eq, 0.0);
    for (int id : scenario.faulted_closed_branches)
        m.add_constraint("fault_closed_" + std::to_string(id),
                         {{h.alpha[net.branch_index(id)], 1.0}}, ConstraintSense::eq, 1.0);
    for (int id : scenario.faulted_open_nodes) {
        const VarId d = h.delta[net.node_index(id)];
        if (d >= 0)
            m.add_constraint("load_fault_open_" + std::to_string(id), {{d, 1.0}},
                             ConstraintSense::eq, 0.0);
    }
    for (int id : scenario.faulted_closed_nodes) {
        const VarId d = h.delta[net.node_index(id)];
        if (d < 0) continue; // a stuck switch on a demandless node restricts nothing
        if (variant.tag == VariantTag::proposed)
            m.add_constraint("load_fault_closed_" + std::to_string(id),
                             {{d, 1.0}, {h.eps[net.node_index(id)], -1.0}},
                             ConstraintSense::ge, 0.0);
        else // every node is energized, so the stuck load must be picked up
            m.add_constraint("load_fault_closed_" + std::to_string(id), {{d, 1.0}},
                             ConstraintSense::eq, 1.0);
    }

    // Weighted restored load, minus a vanishing tie-break that switches off
    // the energization flag of source-free components (two dark neighbors
    // could otherwise vacuously certify each other as energized). The
    // tie-break is orders of magnitude below any load increment, so the
    // pickup decisions are untouched; reported objectives are recomputed
    // from the pickups alone.
    double min_gain = std::numeric_limits<double>::infinity();
    std::vector<LinTerm> obj;
    for (int i = 0; i < n; ++i) {
        if (h.delta[i] < 0) continue;
        const double gain = net.node(i).weight * net.node(i).p_demand_kw;
        obj.push_back({h.delta[i], gain});
        if (gain > 0) min_gain = std::min(min_gain, gain);
    }
    if (!h.eps.empty()) {
        const double kappa =
            std::min(1e-4, (std::isfinite(min_gain) ? min_gain : 1.0) / (4.0 * n));
        for (int i = 0; i < n; ++i)
            if (!net.node(i).is_source()) obj.push_back({h.eps[i], -kappa});
    }
    m.set_objective(ObjectiveSense::maximize, std::move(obj));
    return out;
}

/// One connected component of the closed-branch subgraph.
struct ComponentReport {
    std::vector<int> member_ids;
    std::vector<int> source_ids;
    bool energized = false;
};

struct RestorationSolution {
    double objective_weighted_kw = 0.0;
    std::map<int, int> alpha;          // branch id -> 0/1
    std::map<int, int> delta;          // node id -> 0/1, demand-bearing nodes only
    std::map<int, int> eps;            // node id -> 0/1
    std::map<int, double> p_gen_kw, q_gen_kvar;
    std::map<int, double> v_pu2;       // squared voltage magnitude
    std::map<int, double> p_flow_kw, q_flow_kvar; // positive along from -> to
    std::vector<ComponentReport> components;
};

/// Reads an optimal outcome back through the handles and verifies every
/// structural and electrical requirement the model was supposed to enforce.
/// A violation is a bug in model construction, reported by the name of the
/// broken requirement.
inline RestorationSolution extract_solution(const Network& net, const MgHandles& h,
                                            const SolveOutcome& outcome) {
    if (outcome.status != SolveStatus::optimal || !outcome.has_values())
        throw SolverError("solution extraction needs an optimal outcome with values");
    constexpr double kTol = 1e-6;
    const int n = net.node_count();
    const int L = net.branch_count();
    const double base = net.base_kw();
    const auto& x = outcome.values;
    auto bit = [&](VarId id) { return x.at(id) > 0.5 ? 1 : 0; };

    RestorationSolution sol;
    EdgeSelection closed(L, SelectionRole::actual);
    for (int e = 0; e < L; ++e) {
        const int a = bit(h.alpha[e]);
        sol.alpha[net.branch(e).id] = a;
        closed.set(e, a == 1);
        sol.p_flow_kw[net.branch(e).id] = x.at(h.pflow[e]) * base;
        sol.q_flow_kvar[net.branch(e).id] = x.at(h.qflow[e]) * base;
    }
    for (int i = 0; i < n; ++i) {
        const int id = net.node(i).id;
        if (h.delta[i] >= 0) sol.delta[id] = bit(h.delta[i]);
        sol.eps[id] = h.eps.empty() ? 1 : bit(h.eps[i]);
        sol.v_pu2[id] = x.at(h.v[i]);
        if (h.pgen[i] >= 0) {
            sol.p_gen_kw[id] = x.at(h.pgen[i]) * base;
            sol.q_gen_kvar[id] = x.at(h.qgen[i]) * base;
        }
    }
    for (int i = 0; i < n; ++i) {
        const auto& nd = net.node(i);
        if (h.delta[i] < 0) continue;
        sol.objective_weighted_kw +=
            sol.delta.at(nd.id) * nd.weight * nd.p_demand_kw;
    }

    // Fault fixings first: they compare raw statuses and pin down the most
    // direct construction mistakes.
    for (int id : h.scenario.faulted_open_branches)
        if (sol.alpha.at(id) != 0)
            throw VerificationError("faulted-open branch " + std::to_string(id) +
                                    " is closed (branch fault fixing violated)");
    for (int id : h.scenario.faulted_closed_branches)
        if (sol.alpha.at(id) != 1)
            throw VerificationError("faulted-closed branch " + std::to_string(id) +
                                    " is open (branch fault fixing violated)");
    for (int id : h.scenario.faulted_open_nodes)
        if (sol.delta.count(id) && sol.delta.at(id) != 0)
            throw VerificationError("load at faulted-open node " + std::to_string(id) +
                                    " is picked up (load-switch fixing violated)");
    for (int id : h.scenario.faulted_closed_nodes)
        if (sol.delta.count(id) && sol.delta.at(id) < sol.eps.at(id))
            throw VerificationError("energized load at faulted-closed node " +
                                    std::to_string(id) +
                                    " is shed (load-switch fixing violated)");

    // Radiality: the closed picks must be a spanning forest of the
    // substation-merged graph (which is what also rules out two substations
    // in one component).
    MergedTopology merged = merge_substations(net);
    if (!is_spanning_forest(merged.topology, closed))
        throw VerificationError("closed branches do not form a spanning forest of the "
                                "substation-merged graph (radiality coupling violated)");

    // Component accounting on the original graph.
    ComponentPartition parts = connected_components(net, closed);
    for (const auto& members : parts.components) {
        ComponentReport rep;
        rep.member_ids = members;
        int substations = 0, eps_sum = 0;
        for (int id : members) {
            const auto& nd = net.node(net.node_index(id));
            if (nd.kind == NodeKind::substation) ++substations;
            if (nd.is_source()) rep.source_ids.push_back(id);
            eps_sum += sol.eps.at(id);
        }
        if (substations > 1)
            throw VerificationError("a connected component holds " +
                                    std::to_string(substations) +
                                    " substations (one-substation rule violated)");
        if (eps_sum != 0 && eps_sum != static_cast<int>(members.size()))
            throw VerificationError("energization status differs inside one connected "
                                    "component (propagation rule violated)");
        rep.energized = eps_sum > 0;
        if (rep.energized && rep.source_ids.empty())
            throw VerificationError("an energized component has no source node "
                                    "(energization rule violated)");
        if (!rep.energized && !rep.source_ids.empty())
            throw VerificationError("a component holding a source is marked dark "
                                    "(source energization fixing violated)");
        if (h.eps.empty() && rep.source_ids.size() != 1)
            throw VerificationError("island assignment produced a component with " +
                                    std::to_string(rep.source_ids.size()) +
                                    " sources instead of exactly one");
        sol.components.push_back(std::move(rep));
    }

    // Electrical checks in per-unit.
    for (int i = 0; i < n; ++i) {
        const auto& nd = net.node(i);
        double p = h.pgen[i] >= 0 ? x.at(h.pgen[i]) : 0.0;
        double q = h.qgen[i] >= 0 ? x.at(h.qgen[i]) : 0.0;
        if (h.delta[i] >= 0) {
            p -= sol.delta.at(nd.id) * nd.p_demand_kw / base;
            q -= sol.delta.at(nd.id) * nd.q_demand_kvar / base;
        }
        for (int e : net.incident_branches(i)) {
            const double sgn = net.to_index(e) == i ? 1.0 : -1.0;
            p += sgn * x.at(h.pflow[e]);
            q += sgn * x.at(h.qflow[e]);
        }
        if (std::abs(p) > kTol || std::abs(q) > kTol)
            throw VerificationError("power balance violated at node " +
                                    std::to_string(nd.id));
        const double v = sol.v_pu2.at(nd.id);
        if (v < nd.v_min_pu2 - kTol || v > nd.v_max_pu2 + kTol)
            throw VerificationError("voltage bound violated at node " +
                                    std::to_string(nd.id));
        if (sol.eps.at(nd.id) == 0 && sol.delta.count(nd.id) && sol.delta.at(nd.id) != 0)
            throw VerificationError("dark node " + std::to_string(nd.id) +
                                    " serves load (energization gating violated)");
    }
    for (int e = 0; e < L; ++e) {
        const auto& b = net.branch(e);
        const double pf = x.at(h.pflow[e]), qf = x.at(h.qflow[e]);
        if (sol.alpha.at(b.id) == 0) {
            if (std::abs(pf) > kTol || std::abs(qf) > kTol)
                throw VerificationError("open branch " + std::to_string(b.id) +
                                        " carries flow (capacity gate violated)");
            continue;
        }
        const double drop = x.at(h.v[net.from_index(e)]) - x.at(h.v[net.to_index(e)]) -
                            2.0 * (b.r_pu * pf + b.x_pu * qf);
        if (std::abs(drop) > kTol)
            throw VerificationError("voltage-drop equation not tight on closed branch " +
                                    std::to_string(b.id));
    }
    return sol;
}

/// Restored demand in plain kW, ignoring priority weights.
inline double restored_load(const Network& net, const RestorationSolution& sol) {
    double kw = 0.0;
    for (const auto& [id, d] : sol.delta)
        kw += d * net.node(net.node_index(id)).p_demand_kw;
    return kw;
}

/// Fraction of installed DG real-power capacity that is dispatched;
/// substation head-room is deliberately not part of the denominator.
inline double dg_utilization(const Network& net, const RestorationSolution& sol) {
    double used = 0.0, cap = 0.0;
    for (int i : net.dg_indices()) {
        const int id = net.node(i).id;
        cap += net.node(i).p_cap_kw;
        auto it = sol.p_gen_kw.find(id);
        if (it != sol.p_gen_kw.end()) used += it->second;
    }
    return cap > 0 ? used / cap : 0.0;
}

inline nlohmann::json solution_to_json(const Network& net, const RestorationSolution& sol) {
    nlohmann::json j;
    j["format"] = "gridforest-solution";
    j["version"] = 1;
    j["objective_weighted_kw"] = sol.objective_weighted_kw;
    j["restored_kw"] = restored_load(net, sol);
    j["dg_utilization"] = dg_utilization(net, sol);
    auto dump_map = [](const auto& m) {
        nlohmann::json o = nlohmann::json::object();
        for (const auto& [k, v] : m) o[std::to_string(k)] = v;
        return o;
    };
    j["alpha"] = dump_map(sol.alpha);
    j["delta"] = dump_map(sol.delta);
    j["eps"] = dump_map(sol.eps);
    j["p_gen_kw"] = dump_map(sol.p_gen_kw);
    j["q_gen_kvar"] = dump_map(sol.q_gen_kvar);
    j["v_pu2"] = dump_map(sol.v_pu2);
    j["p_flow_kw"] = dump_map(sol.p_flow_kw);
    j["q_flow_kvar"] = dump_map(sol.q_flow_kvar);
    j["components"] = nlohmann::json::array();
    for (const auto& c : sol.components)
        j["components"].push_back({{"members", c.member_ids},
                                   {"sources", c.source_ids},
                                   {"energized", c.energized}});
    return j;
}

} // namespace gridforest
