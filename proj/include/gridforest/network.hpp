#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridforest/errors.hpp"

namespace gridforest {

enum class NodeKind { substation, dg, load, junction };

inline const char* to_string(NodeKind k) {
    switch (k) {
    case NodeKind::substation: return "substation";
    case NodeKind::dg: return "dg";
    case NodeKind::load: return "load";
    case NodeKind::junction: return "junction";
    }
    return "?";
}

inline NodeKind node_kind_from_string(const std::string& s) {
    if (s == "substation") return NodeKind::substation;
    if (s == "dg") return NodeKind::dg;
    if (s == "load") return NodeKind::load;
    if (s == "junction") return NodeKind::junction;
    throw NetworkError("unknown node kind '" + s + "'");
}

struct NodeRecord {
    int id = 0;
    NodeKind kind = NodeKind::junction;
    double p_demand_kw = 0.0;
    double q_demand_kvar = 0.0;
    double p_cap_kw = 0.0;   // source capacity; 0 unless substation/dg
    double q_cap_kvar = 0.0;
    double weight = 1.0;     // load priority
    double v_min_pu2 = 0.9025; // squared magnitudes, 0.95^2 .. 1.05^2
    double v_max_pu2 = 1.1025;

    bool is_source() const { return kind == NodeKind::substation || kind == NodeKind::dg; }
};

struct BranchRecord {
    int id = 0;
    int from = 0;
    int to = 0;
    double r_pu = 0.0;
    double x_pu = 0.0;
    double s_cap_kva = 0.0;
    bool switchable = true;
    bool normally_open = false; // tie branch
};

/// Immutable distribution-network graph. Nodes and branches keep their input
/// order; dense indices (0..count-1) are used internally, external ids at the
/// boundary. Parallel branches between the same node pair are allowed.
class Network {
public:
    Network(std::vector<NodeRecord> nodes, std::vector<BranchRecord> branches,
            double base_kv = 12.66, double base_mva = 1.0)
        : nodes_(std::move(nodes)), branches_(std::move(branches)),
          base_kv_(base_kv), base_mva_(base_mva) {
        if (base_kv_ <= 0 || base_mva_ <= 0)
            throw NetworkError("base kV and MVA must be positive");
        node_index_.reserve(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto& n = nodes_[i];
            if (!node_index_.emplace(n.id, static_cast<int>(i)).second)
                throw NetworkError("duplicate node id " + std::to_string(n.id));
            if (n.p_demand_kw < 0 || n.q_demand_kvar < 0)
                throw NetworkError("negative demand at node " + std::to_string(n.id));
            if (n.p_cap_kw < 0 || n.q_cap_kvar < 0)
                throw NetworkError("negative capacity at node " + std::to_string(n.id));
            if (!n.is_source() && (n.p_cap_kw != 0 || n.q_cap_kvar != 0))
                throw NetworkError("node " + std::to_string(n.id) +
                                   " has source capacity but is not a substation or dg");
            if (n.v_min_pu2 <= 0 || n.v_max_pu2 < n.v_min_pu2)
                throw NetworkError("bad voltage box at node " + std::to_string(n.id));
            if (n.weight < 0)
                throw NetworkError("negative load weight at node " + std::to_string(n.id));
        }
        adjacency_.assign(nodes_.size(), {});
        branch_index_.reserve(branches_.size());
        for (std::size_t e = 0; e < branches_.size(); ++e) {
            const auto& b = branches_[e];
            if (!branch_index_.emplace(b.id, static_cast<int>(e)).second)
                throw NetworkError("duplicate branch id " + std::to_string(b.id));
            auto fi = node_index_.find(b.from);
            auto ti = node_index_.find(b.to);
            if (fi == node_index_.end() || ti == node_index_.end())
                throw NetworkError("branch " + std::to_string(b.id) +
                                   " references a missing node");
            if (fi->second == ti->second)
                throw NetworkError("branch " + std::to_string(b.id) + " is a self-loop");
            if (b.r_pu < 0 || b.x_pu < 0 || b.s_cap_kva < 0)
                throw NetworkError("negative impedance or capacity on branch " +
                                   std::to_string(b.id));
            adjacency_[fi->second].push_back(static_cast<int>(e));
            adjacency_[ti->second].push_back(static_cast<int>(e));
        }
    }

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int branch_count() const { return static_cast<int>(branches_.size()); }

    const std::vector<NodeRecord>& nodes() const { return nodes_; }
    const std::vector<BranchRecord>& branches() const { return branches_; }
    const NodeRecord& node(int index) const { return nodes_.at(index); }
    const BranchRecord& branch(int index) const { return branches_.at(index); }

    double base_kv() const { return base_kv_; }
    double base_mva() const { return base_mva_; }
    double base_kw() const { return base_mva_ * 1000.0; }
    double base_ohm() const { return base_kv_ * base_kv_ / base_mva_; }

    bool has_node(int id) const { return node_index_.count(id) != 0; }
    bool has_branch(int id) const { return branch_index_.count(id) != 0; }

    int node_index(int id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end())
            throw NetworkError("unknown node id " + std::to_string(id));
        return it->second;
    }
    int branch_index(int id) const {
        auto it = branch_index_.find(id);
        if (it == branch_index_.end())
            throw NetworkError("unknown branch id " + std::to_string(id));
        return it->second;
    }

    int from_index(int branch_idx) const { return node_index_.at(branches_[branch_idx].from); }
    int to_index(int branch_idx) const { return node_index_.at(branches_[branch_idx].to); }

    int other_end(int branch_idx, int node_idx) const {
        int f = from_index(branch_idx), t = to_index(branch_idx);
        return node_idx == f ? t : f;
    }

    /// Branch indices incident to the node; its length is the node degree
    /// used by the energization constraints.
    const std::vector<int>& incident_branches(int node_idx) const {
        return adjacency_.at(node_idx);
    }
    int degree(int node_idx) const { return static_cast<int>(adjacency_.at(node_idx).size()); }

    std::vector<int> substation_indices() const { return indices_of(NodeKind::substation); }
    std::vector<int> dg_indices() const { return indices_of(NodeKind::dg); }
    std::vector<int> load_indices() const { return indices_of(NodeKind::load); }

    std::vector<int> source_indices() const {
        std::vector<int> out;
        for (int i = 0; i < node_count(); ++i)
            if (nodes_[i].is_source()) out.push_back(i);
        return out;
    }

    double total_demand_kw() const {
        double s = 0;
        for (const auto& n : nodes_) s += n.p_demand_kw;
        return s;
    }

    /// Connectivity of the full underlying graph (all branches).
    bool is_connected() const {
        if (nodes_.empty()) return true;
        std::vector<char> seen(nodes_.size(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int reached = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e : adjacency_[u]) {
                int w = other_end(e, u);
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    q.push(w);
                }
            }
        }
        return reached == node_count();
    }

private:
    std::vector<int> indices_of(NodeKind k) const {
        std::vector<int> out;
        for (int i = 0; i < node_count(); ++i)
            if (nodes_[i].kind == k) out.push_back(i);
        return out;
    }

    std::vector<NodeRecord> nodes_;
    std::vector<BranchRecord> branches_;
    double base_kv_;
    double base_mva_;
    std::unordered_map<int, int> node_index_;
    std::unordered_map<int, int> branch_index_;
    std::vector<std::vector<int>> adjacency_;
};

enum class SelectionRole { actual, fictitious, directed_arc };

/// 0/1 vector over the branches of one network (by branch position, not id).
/// The directed_arc role stores two entries per branch: position 2e is the
/// from->to arc of branch e, position 2e+1 the reverse arc.
class EdgeSelection {
public:
    EdgeSelection() = default;
    explicit EdgeSelection(int branch_count, SelectionRole role = SelectionRole::actual)
        : role_(role), branch_count_(branch_count),
          bits_(role == SelectionRole::directed_arc ? 2 * branch_count : branch_count, 0) {}

    static EdgeSelection from_mask(int branch_count, std::uint64_t mask,
                                   SelectionRole role = SelectionRole::actual) {
        EdgeSelection s(branch_count, role);
        for (std::size_t i = 0; i < s.bits_.size(); ++i)
            s.bits_[i] = (mask >> i) & 1u;
        return s;
    }

    std::uint64_t to_mask() const {
        if (bits_.size() > 64) throw GraphError("selection too wide for a 64-bit mask");
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) m |= std::uint64_t{1} << i;
        return m;
    }

    SelectionRole role() const { return role_; }
    int branch_count() const { return branch_count_; }
    int size() const { return static_cast<int>(bits_.size()); }

    bool test(int i) const { return bits_.at(i) != 0; }
    void set(int i, bool v) { bits_.at(i) = v ? 1 : 0; }

    int count() const {
        int c = 0;
        for (auto b : bits_) c += b;
        return c;
    }

    /// Componentwise <=; both selections must have the same shape.
    bool subset_of(const EdgeSelection& other) const {
        if (bits_.size() != other.bits_.size())
            throw GraphError("selection size mismatch in subset test");
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] && !other.bits_[i]) return false;
        return true;
    }

    friend bool operator==(const EdgeSelection& a, const EdgeSelection& b) {
        return a.role_ == b.role_ && a.bits_ == b.bits_;
    }
    friend bool operator<(const EdgeSelection& a, const EdgeSelection& b) {
        return a.bits_ < b.bits_;
    }

private:
    SelectionRole role_ = SelectionRole::actual;
    int branch_count_ = 0;
    std::vector<std::uint8_t> bits_;
};

} // namespace gridforest
