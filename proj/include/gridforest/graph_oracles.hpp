#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gridforest/errors.hpp"
#include "gridforest/network.hpp"

namespace gridforest {

namespace detail {

// Union-find over dense node indices.
class DisjointSet {
public:
    explicit DisjointSet(int n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    /// False if x and y were already joined (adding the edge closes a cycle).
    bool unite(int x, int y) {
        int rx = find(x), ry = find(y);
        if (rx == ry) return false;
        if (rank_[rx] < rank_[ry]) std::swap(rx, ry);
        parent_[ry] = rx;
        if (rank_[rx] == rank_[ry]) ++rank_[rx];
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

inline void check_undirected_selection(const Network& net, const EdgeSelection& sel) {
    if (sel.role() == SelectionRole::directed_arc)
        throw GraphError("expected an undirected (actual or fictitious) selection");
    if (sel.size() != net.branch_count())
        throw GraphError("selection has " + std::to_string(sel.size()) +
                         " entries but the network has " +
                         std::to_string(net.branch_count()) + " branches");
}

} // namespace detail

/// True iff the selected branches form a spanning tree: they touch every
/// node, are acyclic and number exactly node_count-1. A doubled parallel
/// branch counts as a cycle.
inline bool is_spanning_tree(const Network& net, const EdgeSelection& sel) {
    detail::check_undirected_selection(net, sel);
    const int n = net.node_count();
    if (sel.count() != n - 1) return false;
    detail::DisjointSet dsu(n);
    for (int e = 0; e < net.branch_count(); ++e)
        if (sel.test(e) && !dsu.unite(net.from_index(e), net.to_index(e)))
            return false; // cycle
    // n-1 acyclic edges over n nodes already implies one component.
    return true;
}

/// True iff the selected branches contain no cycle. Any coverage and any
/// component count qualifies; the empty selection is a spanning forest.
inline bool is_spanning_forest(const Network& net, const EdgeSelection& sel) {
    detail::check_undirected_selection(net, sel);
    detail::DisjointSet dsu(net.node_count());
    for (int e = 0; e < net.branch_count(); ++e)
        if (sel.test(e) && !dsu.unite(net.from_index(e), net.to_index(e)))
            return false;
    return true;
}

struct ComponentPartition {
    /// Node ids per component; each component sorted ascending, components
    /// ordered by their smallest node id.
    std::vector<std::vector<int>> components;
    int kappa() const { return static_cast<int>(components.size()); }
};

inline ComponentPartition connected_components(const Network& net, const EdgeSelection& sel) {
    detail::check_undirected_selection(net, sel);
    const int n = net.node_count();
    detail::DisjointSet dsu(n);
    for (int e = 0; e < net.branch_count(); ++e)
        if (sel.test(e)) dsu.unite(net.from_index(e), net.to_index(e));
    std::vector<std::vector<int>> by_root(n);
    for (int i = 0; i < n; ++i) by_root[dsu.find(i)].push_back(net.node(i).id);
    ComponentPartition out;
    for (auto& grp : by_root) {
        if (grp.empty()) continue;
        std::sort(grp.begin(), grp.end());
        out.components.push_back(std::move(grp));
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

/// Exact count via the matrix-tree theorem: any cofactor of the graph
/// Laplacian, evaluated over the integers with fraction-free (Bareiss)
/// elimination. Disconnected graphs count 0.
inline std::int64_t count_spanning_trees(const Network& net) {
    const int n = net.node_count();
    if (n <= 1) return 1;
    // Laplacian with the last row/column deleted.
    const int m = n - 1;
    std::vector<std::vector<__int128>> a(m, std::vector<__int128>(m, 0));
    for (int e = 0; e < net.branch_count(); ++e) {
        int u = net.from_index(e), v = net.to_index(e);
        if (u < m) a[u][u] += 1;
        if (v < m) a[v][v] += 1;
        if (u < m && v < m) {
            a[u][v] -= 1;
            a[v][u] -= 1;
        }
    }
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < m - 1; ++k) {
        if (a[k][k] == 0) {
            int pivot = -1;
            for (int i = k + 1; i < m; ++i)
                if (a[i][k] != 0) { pivot = i; break; }
            if (pivot < 0) return 0;
            std::swap(a[k], a[pivot]);
            sign = -sign;
        }
        for (int i = k + 1; i < m; ++i)
            for (int j = k + 1; j < m; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    __int128 det = a[m - 1][m - 1] * sign;
    return static_cast<std::int64_t>(det);
}

/// All spanning trees, ordered by ascending branch mask. Hard |L| <= 25
/// guard; a disconnected graph yields the empty set.
inline std::vector<EdgeSelection> enumerate_spanning_trees(const Network& net) {
    const int L = net.branch_count();
    if (L > 25)
        throw GraphError("spanning tree enumeration limited to 25 branches, got " +
                         std::to_string(L));
    const int n = net.node_count();
    std::vector<EdgeSelection> out;
    if (n - 1 > L || n == 0) return out;
    // Walk combinations of n-1 branches; test each with union-find.
    std::vector<int> comb(n - 1);
    std::iota(comb.begin(), comb.end(), 0);
    const int k = n - 1;
    while (true) {
        detail::DisjointSet dsu(n);
        bool acyclic = true;
        for (int idx : comb)
            if (!dsu.unite(net.from_index(idx), net.to_index(idx))) {
                acyclic = false;
                break;
            }
        if (acyclic) {
            std::uint64_t mask = 0;
            for (int idx : comb) mask |= std::uint64_t{1} << idx;
            out.push_back(EdgeSelection::from_mask(L, mask, SelectionRole::fictitious));
        }
        if (k == 0) break;
        int i = k - 1;
        while (i >= 0 && comb[i] == L - k + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All acyclic branch subsets, ordered by ascending mask. Hard |L| <= 20
/// guard.
inline std::vector<EdgeSelection> enumerate_spanning_forests(const Network& net) {
    const int L = net.branch_count();
    if (L > 20)
        throw GraphError("spanning forest enumeration limited to 20 branches, got " +
                         std::to_string(L));
    std::vector<EdgeSelection> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L); ++mask) {
        detail::DisjointSet dsu(net.node_count());
        bool acyclic = true;
        for (int e = 0; e < L && acyclic; ++e)
            if ((mask >> e) & 1u)
                acyclic = dsu.unite(net.from_index(e), net.to_index(e));
        if (acyclic) out.push_back(EdgeSelection::from_mask(L, mask));
    }
    return out;
}

/// Grows the given spanning forest into a spanning tree containing it, by
/// repeatedly closing a branch that links two components. Requires the
/// underlying graph to be connected.
inline EdgeSelection is_subgraph_of_some_tree(const Network& net, const EdgeSelection& forest) {
    detail::check_undirected_selection(net, forest);
    if (!is_spanning_forest(net, forest))
        throw GraphError("input selection is not a spanning forest");
    if (!net.is_connected())
        throw GraphError("witness tree requires a connected underlying graph");
    detail::DisjointSet dsu(net.node_count());
    EdgeSelection witness(net.branch_count(), SelectionRole::fictitious);
    for (int e = 0; e < net.branch_count(); ++e)
        if (forest.test(e)) {
            dsu.unite(net.from_index(e), net.to_index(e));
            witness.set(e, true);
        }
    for (int e = 0; e < net.branch_count(); ++e)
        if (!witness.test(e) && dsu.unite(net.from_index(e), net.to_index(e)))
            witness.set(e, true);
    return witness;
}

} // namespace gridforest
