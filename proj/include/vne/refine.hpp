#pragma once

#include "vne/link_place.hpp"
#include "vne/policy.hpp"

namespace vne {

struct SearchCounters {
    long long simulations = 0;
    long long adapts = 0;
    long long link_attempts = 0;  // virtual-link routing attempts (rollouts + refinement)
    long long refine_calls = 0;
};

struct RefineConfig {
    int k = 16;     // candidate hosts per move
    int x = 0;      // outer iterations; 0 means the slice's node count
    int level = 2;  // search level at which refinement runs; above the search level it never fires
};

/// How much a placed virtual node is worth moving: the bandwidth its adjacent
/// links consume (demand times current mapped path length) per unit of
/// degree. Only defined for nodes of degree >= 1.
inline double improvement_score(int vnode, const Embedding& emb, const SliceRequest& slice) {
    double sum = 0.0;
    for (const auto& [peer, e] : slice.vadj[vnode])
        sum += static_cast<double>(slice.vedges[e].bw_demand) * emb.link_map[e].size();
    return sum / slice.degree(vnode);
}

/// Up to K alternative hosts for `moving_vnode`, ranked by the distance
/// heuristic against the hosts of the other virtual nodes (closest first,
/// ties by lowest node id). Nodes hosting another vnode of this slice, the
/// current host, and nodes without enough residual CPU are excluded.
inline std::vector<int> candidate_hosts(const PhysicalNetwork& net, const std::vector<int>& hosts,
                                        int moving_vnode, int k, int cpu_demand) {
    const int n = net.node_count();
    std::vector<char> used(n, 0);
    MdpState others;
    others.placement.assign(n, 0);
    for (size_t v = 0; v < hosts.size(); ++v) {
        if (hosts[v] < 0) continue;
        used[hosts[v]] = 1;
        if (static_cast<int>(v) != moving_vnode) others.placement[hosts[v]] = static_cast<int>(v) + 1;
    }
    std::vector<std::pair<double, int>> ranked;
    for (int p = 0; p < n; ++p) {
        if (used[p] || net.cpu_residual(p) < cpu_demand) continue;
        ranked.push_back({weight_init(others, p, net.dist), p});
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    std::vector<int> out;
    for (const auto& [score, p] : ranked) {
        if (static_cast<int>(out.size()) == k) break;
        out.push_back(p);
    }
    return out;
}

/// Local improvement of a successful embedding: repeatedly moves the highest
/// scoring virtual node to the best of K candidate hosts, rerouting its
/// adjacent links, and keeps strict reward improvements only. Stops after X
/// rounds or as soon as a round brings no improvement. The returned reward is
/// never below the input's, and `net` is left exactly as it was.
inline Embedding refine(PhysicalNetwork& net, const SliceRequest& slice, const Embedding& emb,
                        const CandidateTable& table, const RefineConfig& cfg, RewardKind kind,
                        SearchCounters* counters = nullptr) {
    if (counters) ++counters->refine_calls;
    const int nv = slice.size();
    const int max_rounds = cfg.x > 0 ? cfg.x : nv;

    std::vector<int> seq_pos(nv);  // vnode -> position in the action sequence
    for (int k = 0; k < nv; ++k) seq_pos[table.order[k]] = k;

    Embedding best = emb;
    apply_link_map(net, slice, best.link_map, +1);

    for (int round = 0; round < max_rounds; ++round) {
        const double prev_reward = best.reward;

        int moving = -1;
        double moving_score = -1.0;
        for (int v = 0; v < nv; ++v) {
            if (slice.degree(v) == 0) continue;
            const double s = improvement_score(v, best, slice);
            if (s > moving_score) {
                moving_score = s;
                moving = v;
            }
        }
        if (moving < 0) break;

        std::vector<std::pair<int, int>> adjacent;  // (vedge, demand), routed heaviest first
        for (const auto& [peer, e] : slice.vadj[moving]) adjacent.push_back({e, slice.vedges[e].bw_demand});
        std::stable_sort(adjacent.begin(), adjacent.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });

        for (int cand : candidate_hosts(net, best.hosts, moving, cfg.k,
                                        slice.vnodes[moving].cpu_demand)) {
            // Tentatively free the moving node's paths, then reroute them
            // against the candidate host.
            for (const auto& [e, demand] : adjacent)
                for (int pe : best.link_map[e]) net.edges[pe].bw_occupied -= demand;

            std::vector<int> hosts = best.hosts;
            hosts[moving] = cand;
            LinkMap new_paths(slice.vedges.size());
            bool routed_all = true;
            std::vector<int> routed;
            for (const auto& [e, demand] : adjacent) {
                if (counters) ++counters->link_attempts;
                auto p = bfs_capacity_path(net, hosts[slice.vedges[e].a], hosts[slice.vedges[e].b], demand);
                if (!p) {
                    routed_all = false;
                    break;
                }
                for (int pe : *p) net.edges[pe].bw_occupied += demand;
                new_paths[e] = std::move(*p);
                routed.push_back(e);
            }

            bool keep = false;
            if (routed_all) {
                Embedding moved = best;
                moved.hosts = hosts;
                moved.seq[seq_pos[moving]] = cand;
                for (const auto& [e, demand] : adjacent) moved.link_map[e] = new_paths[e];
                moved.reward = embedding_reward(kind, net, slice, moved);
                if (moved.reward > best.reward) {
                    best = std::move(moved);
                    keep = true;
                }
            }
            if (!keep) {
                for (int e : routed)
                    for (int pe : new_paths[e]) net.edges[pe].bw_occupied -= slice.vedges[e].bw_demand;
                for (const auto& [e, demand] : adjacent)
                    for (int pe : best.link_map[e]) net.edges[pe].bw_occupied += demand;
            }
        }

        if (best.reward == prev_reward) break;
    }

    apply_link_map(net, slice, best.link_map, -1);
    return best;
}

}  // namespace vne
