#pragma once

#include <optional>

#include "vne/mdp.hpp"

namespace vne {

/// Minimum-hop path from src to dst using only edges with residual bandwidth
/// >= min_bw. Ties between equal-length paths are broken deterministically by
/// expanding lowest neighbor ids first. Returns the edge-id path, or nothing.
inline std::optional<std::vector<int>> bfs_capacity_path(const PhysicalNetwork& net, int src,
                                                         int dst, int min_bw) {
    const int n = net.node_count();
    std::vector<int> parent_edge(n, -1);
    std::vector<char> seen(n, 0);
    std::deque<int> q;
    seen[src] = 1;
    q.push_back(src);
    while (!q.empty()) {
        const int x = q.front();
        q.pop_front();
        if (x == dst) break;
        for (const auto& [nb, e] : net.adj[x]) {
            if (seen[nb] || net.bw_residual(e) < min_bw) continue;
            seen[nb] = 1;
            parent_edge[nb] = e;
            q.push_back(nb);
        }
    }
    if (!seen[dst]) return std::nullopt;
    std::vector<int> path;
    for (int x = dst; x != src;) {
        const int e = parent_edge[x];
        path.push_back(e);
        x = net.edges[e].other(x);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// Adds (sign=+1) or removes (sign=-1) the bandwidth of every mapped path.
inline void apply_link_map(PhysicalNetwork& net, const SliceRequest& slice, const LinkMap& lm,
                           int sign) {
    for (size_t e = 0; e < lm.size(); ++e)
        for (int pe : lm[e]) net.edges[pe].bw_occupied += sign * slice.vedges[e].bw_demand;
}

// Virtual edge indices sorted by descending demand, ties by index.
inline std::vector<int> vedges_by_demand(const SliceRequest& slice) {
    std::vector<int> order(slice.vedges.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return slice.vedges[a].bw_demand > slice.vedges[b].bw_demand;
    });
    return order;
}

/// Greedy virtual-link placement: routes links by descending bandwidth demand
/// on capacity-filtered shortest paths, reserving bandwidth as it goes. On
/// success the map's bandwidth is left reserved on `net` (undo it with
/// apply_link_map(..., -1)); on failure all reservations are rolled back and
/// nothing is returned. `attempt_counter`, when given, is incremented once
/// per virtual link routing attempt, including the failing one.
inline std::optional<LinkMap> vlink(PhysicalNetwork& net, const SliceRequest& slice,
                                    const std::vector<int>& hosts,
                                    long long* attempt_counter = nullptr) {
    LinkMap lm(slice.vedges.size());
    std::vector<int> routed;
    for (int e : vedges_by_demand(slice)) {
        const auto& ve = slice.vedges[e];
        if (attempt_counter) ++*attempt_counter;
        auto path = bfs_capacity_path(net, hosts[ve.a], hosts[ve.b], ve.bw_demand);
        if (!path) {
            for (int r : routed)
                for (int pe : lm[r]) net.edges[pe].bw_occupied -= slice.vedges[r].bw_demand;
            return std::nullopt;
        }
        for (int pe : *path) net.edges[pe].bw_occupied += ve.bw_demand;
        lm[e] = std::move(*path);
        routed.push_back(e);
    }
    return lm;
}

}  // namespace vne
