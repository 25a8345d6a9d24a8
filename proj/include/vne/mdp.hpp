#pragma once

#include "vne/graph.hpp"

namespace vne {

struct IllegalAction : std::runtime_error {
    explicit IllegalAction(const std::string& what) : std::runtime_error(what) {}
};
struct IncompleteEmbedding : std::runtime_error {
    explicit IncompleteEmbedding(const std::string& what) : std::runtime_error(what) {}
};

/// State of the node-placement decision process. The placement vector has one
/// entry per physical node holding the 1-based id of the virtual node it
/// hosts, or 0 when free. Virtual nodes are placed in a fixed order, so the
/// placement vector (equivalently, the action prefix) identifies the state
/// completely; `next` indexes the processing order.
struct MdpState {
    int next = 0;
    std::vector<int> placement;
};

/// Admissible physical hosts per virtual node after pre-treatment pruning,
/// plus the processing order (fewest candidates first, ties by vnode index).
struct CandidateTable {
    std::vector<std::vector<int>> candidates;  // per vnode, ascending node ids
    std::vector<int> order;                    // vnode indices

    int current_vnode(const MdpState& st) const { return order[st.next]; }
    bool terminal(const MdpState& st) const { return st.next >= static_cast<int>(order.size()); }
};

/// Removes (vnode, node) pairs that provably cannot host: insufficient CPU,
/// a single adjacent link demand above every incident residual, or the sum of
/// adjacent demands above the summed incident residuals.
inline CandidateTable prune_candidates(const PhysicalNetwork& net, const SliceRequest& slice) {
    const int nv = slice.size();
    const int np = net.node_count();

    std::vector<int> max_inc(np, 0), sum_inc(np, 0);
    for (int p = 0; p < np; ++p) {
        for (const auto& [nb, e] : net.adj[p]) {
            const int r = net.bw_residual(e);
            max_inc[p] = std::max(max_inc[p], r);
            sum_inc[p] += r;
        }
    }

    CandidateTable table;
    table.candidates.resize(nv);
    for (int v = 0; v < nv; ++v) {
        int max_adj = 0, sum_adj = 0;
        for (const auto& [peer, e] : slice.vadj[v]) {
            max_adj = std::max(max_adj, slice.vedges[e].bw_demand);
            sum_adj += slice.vedges[e].bw_demand;
        }
        for (int p = 0; p < np; ++p) {
            if (slice.vnodes[v].cpu_demand > net.cpu_residual(p)) continue;
            if (max_adj > max_inc[p]) continue;
            if (sum_adj > sum_inc[p]) continue;
            table.candidates[v].push_back(p);
        }
    }

    table.order.resize(nv);
    for (int v = 0; v < nv; ++v) table.order[v] = v;
    std::stable_sort(table.order.begin(), table.order.end(), [&](int a, int b) {
        return table.candidates[a].size() < table.candidates[b].size();
    });
    return table;
}

inline MdpState initial_state(const PhysicalNetwork& net, const CandidateTable&) {
    MdpState st;
    st.next = 0;
    st.placement.assign(net.node_count(), 0);
    return st;
}

// Remaining 1-based vnode ids in processing order.
inline std::vector<int> pending_ids(const MdpState& st, const CandidateTable& table) {
    std::vector<int> out;
    for (int k = st.next; k < static_cast<int>(table.order.size()); ++k)
        out.push_back(table.order[k] + 1);
    return out;
}

/// Actions legal for the next virtual node: pruned candidates that are still
/// free of same-slice virtual nodes and have enough residual CPU.
inline std::vector<int> legal_actions(const MdpState& st, const PhysicalNetwork& net,
                                      const SliceRequest& slice, const CandidateTable& table) {
    std::vector<int> out;
    const int v = table.current_vnode(st);
    const int demand = slice.vnodes[v].cpu_demand;
    for (int p : table.candidates[v])
        if (st.placement[p] == 0 && demand <= net.cpu_residual(p)) out.push_back(p);
    return out;
}

inline void apply_action_inplace(MdpState& st, int action, int vnode_id) {
    if (action < 0 || action >= static_cast<int>(st.placement.size()))
        throw IllegalAction("apply_action: action out of range");
    if (st.placement[action] != 0)
        throw IllegalAction("apply_action: physical node already hosts a virtual node of this slice");
    st.placement[action] = vnode_id;
    ++st.next;
}

inline MdpState apply_action(const MdpState& st, int action, int vnode_id) {
    MdpState out = st;
    apply_action_inplace(out, action, vnode_id);
    return out;
}

/// Revenue: what the client pays, the sum of all CPU and bandwidth demands.
inline long long revenue(const SliceRequest& slice) {
    long long r = 0;
    for (const auto& vn : slice.vnodes) r += vn.cpu_demand;
    for (const auto& ve : slice.vedges) r += ve.bw_demand;
    return r;
}

/// Cost: physical resources consumed, i.e. each link demand multiplied by its
/// mapped path length plus the CPU demands.
inline long long cost(const SliceRequest& slice, const Embedding& emb) {
    if (static_cast<int>(emb.hosts.size()) != slice.size() ||
        emb.link_map.size() != slice.vedges.size())
        throw IncompleteEmbedding("cost: embedding incomplete");
    long long c = 0;
    for (int v = 0; v < slice.size(); ++v) {
        if (emb.hosts[v] < 0) throw IncompleteEmbedding("cost: unplaced vnode");
        c += slice.vnodes[v].cpu_demand;
    }
    for (size_t e = 0; e < slice.vedges.size(); ++e) {
        if (emb.link_map[e].empty()) throw IncompleteEmbedding("cost: vedge without path");
        c += static_cast<long long>(slice.vedges[e].bw_demand) * emb.link_map[e].size();
    }
    return c;
}

inline bool embedding_complete(const SliceRequest& slice, const Embedding& emb) {
    if (static_cast<int>(emb.hosts.size()) != slice.size()) return false;
    if (emb.link_map.size() != slice.vedges.size()) return false;
    for (int v = 0; v < slice.size(); ++v)
        if (emb.hosts[v] < 0) return false;
    for (const auto& path : emb.link_map)
        if (path.empty()) return false;
    return true;
}

/// Revenue-to-cost reward in [0, 1]; 0 for any failed embedding. The maximum
/// of 1 is reached exactly when every virtual link maps to a one-hop path.
inline double reward_ratio(const SliceRequest& slice, const Embedding& emb) {
    if (!embedding_complete(slice, emb)) return 0.0;
    const long long c = cost(slice, emb);
    if (c <= 0) return 0.0;
    return static_cast<double>(revenue(slice)) / static_cast<double>(c);
}

/// Degree-aware alternative reward: 1 / (bandwidth used + sum over vnodes of
/// host degree minus vnode degree). Clamped to 1 if the denominator is not
/// positive. 0 for failed embeddings.
inline double afbd_reward(const PhysicalNetwork& net, const SliceRequest& slice, const Embedding& emb) {
    if (!embedding_complete(slice, emb)) return 0.0;
    long long denom = 0;
    for (size_t e = 0; e < slice.vedges.size(); ++e)
        denom += static_cast<long long>(slice.vedges[e].bw_demand) * emb.link_map[e].size();
    for (int v = 0; v < slice.size(); ++v)
        denom += net.degree(emb.hosts[v]) - slice.degree(v);
    if (denom <= 0) return 1.0;
    return 1.0 / static_cast<double>(denom);
}

enum class RewardKind { ratio, afbd };

inline double embedding_reward(RewardKind kind, const PhysicalNetwork& net,
                               const SliceRequest& slice, const Embedding& emb) {
    return kind == RewardKind::ratio ? reward_ratio(slice, emb) : afbd_reward(net, slice, emb);
}

// hosts[v] for a (possibly partial) action sequence under the table's order.
inline std::vector<int> hosts_from_seq(const std::vector<int>& seq, const CandidateTable& table,
                                       int n_vnodes) {
    std::vector<int> hosts(n_vnodes, -1);
    for (size_t k = 0; k < seq.size(); ++k) hosts[table.order[k]] = seq[k];
    return hosts;
}

}  // namespace vne
