#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vne {

struct InfeasibleCommit : std::runtime_error {
    explicit InfeasibleCommit(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownSlice : std::runtime_error {
    explicit UnknownSlice(const std::string& what) : std::runtime_error(what) {}
};
struct Disconnected : std::runtime_error {
    explicit Disconnected(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

struct PhysicalNode {
    int cpu_capacity = 0;
    int cpu_occupied = 0;
};

struct PhysicalEdge {
    int u = -1;
    int v = -1;
    int bw_capacity = 0;
    int bw_occupied = 0;

    int other(int node) const { return node == u ? v : u; }
    bool joins(int a, int b) const { return (u == a && v == b) || (u == b && v == a); }
};

struct VirtualNode {
    int cpu_demand = 0;
};

struct VirtualEdge {
    int a = -1;  // vnode index
    int b = -1;
    int bw_demand = 0;
};

/// A virtual network request: node/link demands plus its residence interval.
/// Arrival-only scenarios use t_depart = +infinity.
struct SliceRequest {
    int id = 0;
    std::vector<VirtualNode> vnodes;
    std::vector<VirtualEdge> vedges;
    double t_arrive = 0.0;
    double t_depart = std::numeric_limits<double>::infinity();

    // vnode -> list of (peer vnode, vedge index); built by finalize()
    std::vector<std::vector<std::pair<int, int>>> vadj;

    int size() const { return static_cast<int>(vnodes.size()); }
    int degree(int v) const { return static_cast<int>(vadj[v].size()); }

    // Builds adjacency and validates that demands are positive and the virtual
    // graph is simple (no loops, no parallel links).
    void finalize() {
        const int n = size();
        vadj.assign(n, {});
        for (const auto& vn : vnodes) {
            if (vn.cpu_demand <= 0) throw std::invalid_argument("slice: cpu demand must be positive");
        }
        std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
        for (int e = 0; e < static_cast<int>(vedges.size()); ++e) {
            const auto& ve = vedges[e];
            if (ve.a < 0 || ve.a >= n || ve.b < 0 || ve.b >= n || ve.a == ve.b)
                throw std::invalid_argument("slice: bad virtual edge endpoints");
            if (ve.bw_demand <= 0) throw std::invalid_argument("slice: bw demand must be positive");
            if (seen[ve.a][ve.b]) throw std::invalid_argument("slice: parallel virtual edge");
            seen[ve.a][ve.b] = seen[ve.b][ve.a] = true;
            vadj[ve.a].push_back({ve.b, e});
            vadj[ve.b].push_back({ve.a, e});
        }
    }
};

// vedge index -> ordered list of physical edge ids forming the mapped path
using LinkMap = std::vector<std::vector<int>>;

/// Result of placing one slice: the action sequence (physical node chosen at
/// each placement step), the per-vnode hosts, the virtual-link paths and the
/// reward the embedding scored.
struct Embedding {
    std::vector<int> seq;
    std::vector<int> hosts;   // vnode index -> physical node, -1 if unplaced
    LinkMap link_map;
    double reward = 0.0;
};

// Resource usage retained for a committed slice so it can be released later.
struct CommittedSlice {
    std::vector<int> hosts;
    std::vector<int> cpu_demands;
    std::vector<int> bw_demands;
    LinkMap paths;
};

/// Substrate network. Topology and capacities are fixed after finalize();
/// only the occupied amounts change as slices are committed and released.
/// One instance is confined to a single simulation thread.
class PhysicalNetwork {
public:
    std::vector<PhysicalNode> nodes;
    std::vector<PhysicalEdge> edges;
    // node -> (neighbor, edge id), sorted by neighbor id after finalize()
    std::vector<std::vector<std::pair<int, int>>> adj;
    // hop-count distance matrix; unreachable pairs hold the sentinel |V|
    std::vector<std::vector<int>> dist;
    std::unordered_map<int, CommittedSlice> live;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    int add_node(int cpu_capacity) {
        nodes.push_back({cpu_capacity, 0});
        adj.emplace_back();
        return node_count() - 1;
    }

    // Adds an undirected edge. A duplicate of an existing edge is merged by
    // summing capacities (with a warning); self loops and non-positive
    // capacities are rejected.
    int add_edge(int u, int v, int bw_capacity) {
        if (u < 0 || v < 0 || u >= node_count() || v >= node_count())
            throw std::invalid_argument("add_edge: endpoint out of range");
        if (u == v) throw std::invalid_argument("add_edge: self loop");
        if (bw_capacity <= 0) throw std::invalid_argument("add_edge: capacity must be positive");
        if (int e = edge_between(u, v); e >= 0) {
            std::cerr << "warning: duplicate edge (" << u << "," << v
                      << ") merged, capacities summed\n";
            edges[e].bw_capacity += bw_capacity;
            return e;
        }
        const int e = edge_count();
        edges.push_back({u, v, bw_capacity, 0});
        adj[u].push_back({v, e});
        adj[v].push_back({u, e});
        return e;
    }

    int edge_between(int u, int v) const {
        for (const auto& [nb, e] : adj[u])
            if (nb == v) return e;
        return -1;
    }

    int cpu_residual(int n) const { return nodes[n].cpu_capacity - nodes[n].cpu_occupied; }
    int bw_residual(int e) const { return edges[e].bw_capacity - edges[e].bw_occupied; }

    int degree(int n) const { return static_cast<int>(adj[n].size()); }

    // Sorts adjacency (gives BFS its deterministic lowest-id expansion order)
    // and computes the hop-distance matrix.
    void finalize() {
        for (auto& list : adj) std::sort(list.begin(), list.end());
        compute_distances();
    }

    bool connected() const {
        if (nodes.empty()) return true;
        std::vector<char> vis(node_count(), 0);
        std::deque<int> q{0};
        vis[0] = 1;
        int cnt = 1;
        while (!q.empty()) {
            int n = q.front();
            q.pop_front();
            for (const auto& [nb, e] : adj[n]) {
                if (!vis[nb]) {
                    vis[nb] = 1;
                    ++cnt;
                    q.push_back(nb);
                }
            }
        }
        return cnt == node_count();
    }

private:
    void compute_distances();
};

/// All-pairs minimum hop counts, ignoring capacities. Unreachable pairs get
/// the finite sentinel |V| so downstream weight formulas stay finite.
inline std::vector<std::vector<int>> hop_distance_matrix(const PhysicalNetwork& net) {
    const int n = net.node_count();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, n));
    std::deque<int> q;
    for (int s = 0; s < n; ++s) {
        auto& row = d[s];
        row[s] = 0;
        q.clear();
        q.push_back(s);
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (const auto& [nb, e] : net.adj[x]) {
                if (row[nb] > row[x] + 1) {
                    row[nb] = row[x] + 1;
                    q.push_back(nb);
                }
            }
        }
    }
    return d;
}

inline void PhysicalNetwork::compute_distances() { dist = hop_distance_matrix(*this); }

/// Applies a feasible embedding to the substrate, or throws InfeasibleCommit
/// if any residual would go negative (which signals a solver bug, not a
/// normal rejection). The usage is recorded so release_embedding can undo it.
inline void commit_embedding(PhysicalNetwork& net, const SliceRequest& slice, const Embedding& emb) {
    const int nv = slice.size();
    if (static_cast<int>(emb.hosts.size()) != nv)
        throw InfeasibleCommit("commit: host vector size mismatch");
    if (static_cast<int>(emb.link_map.size()) != static_cast<int>(slice.vedges.size()))
        throw InfeasibleCommit("commit: link map size mismatch");
    if (net.live.count(slice.id)) throw InfeasibleCommit("commit: slice id already committed");

    // Stage the full delta, then verify before touching the network.
    std::vector<int> cpu_delta(net.node_count(), 0);
    std::vector<int> bw_delta(net.edge_count(), 0);
    for (int v = 0; v < nv; ++v) {
        const int h = emb.hosts[v];
        if (h < 0 || h >= net.node_count()) throw InfeasibleCommit("commit: unplaced vnode");
        cpu_delta[h] += slice.vnodes[v].cpu_demand;
    }
    for (int e = 0; e < static_cast<int>(slice.vedges.size()); ++e) {
        if (emb.link_map[e].empty()) throw InfeasibleCommit("commit: vedge without path");
        for (int pe : emb.link_map[e]) bw_delta[pe] += slice.vedges[e].bw_demand;
    }
    for (int n = 0; n < net.node_count(); ++n)
        if (cpu_delta[n] > net.cpu_residual(n)) throw InfeasibleCommit("commit: cpu residual negative");
    for (int e = 0; e < net.edge_count(); ++e)
        if (bw_delta[e] > net.bw_residual(e)) throw InfeasibleCommit("commit: bw residual negative");

    for (int n = 0; n < net.node_count(); ++n) net.nodes[n].cpu_occupied += cpu_delta[n];
    for (int e = 0; e < net.edge_count(); ++e) net.edges[e].bw_occupied += bw_delta[e];

    CommittedSlice rec;
    rec.hosts = emb.hosts;
    rec.cpu_demands.resize(nv);
    for (int v = 0; v < nv; ++v) rec.cpu_demands[v] = slice.vnodes[v].cpu_demand;
    rec.bw_demands.resize(slice.vedges.size());
    for (size_t e = 0; e < slice.vedges.size(); ++e) rec.bw_demands[e] = slice.vedges[e].bw_demand;
    rec.paths = emb.link_map;
    net.live.emplace(slice.id, std::move(rec));
}

/// Exact inverse of commit_embedding.
inline void release_embedding(PhysicalNetwork& net, int slice_id) {
    auto it = net.live.find(slice_id);
    if (it == net.live.end()) throw UnknownSlice("release: slice " + std::to_string(slice_id) + " not committed");
    const CommittedSlice& rec = it->second;
    for (size_t v = 0; v < rec.hosts.size(); ++v)
        net.nodes[rec.hosts[v]].cpu_occupied -= rec.cpu_demands[v];
    for (size_t e = 0; e < rec.paths.size(); ++e)
        for (int pe : rec.paths[e]) net.edges[pe].bw_occupied -= rec.bw_demands[e];
    net.live.erase(it);
}

struct GraphStats {
    double mean_distance = 0.0;
    int diameter = 0;
    double distance_stddev = 0.0;
    double clustering_coefficient = 0.0;
};

/// Distance statistics over all unordered distinct node pairs plus the mean
/// local clustering coefficient (nodes of degree < 2 contribute 0).
inline GraphStats graph_stats(const PhysicalNetwork& net) {
    if (!net.connected()) throw Disconnected("graph_stats: graph is not connected");
    const int n = net.node_count();
    if (n < 2) throw DegenerateInput("graph_stats: need at least 2 nodes");
    const auto d = net.dist.empty() ? hop_distance_matrix(net) : net.dist;

    GraphStats st;
    double sum = 0.0, sum2 = 0.0;
    long long pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            sum += d[i][j];
            sum2 += static_cast<double>(d[i][j]) * d[i][j];
            st.diameter = std::max(st.diameter, d[i][j]);
            ++pairs;
        }
    }
    st.mean_distance = sum / pairs;
    st.distance_stddev = std::sqrt(std::max(0.0, sum2 / pairs - st.mean_distance * st.mean_distance));

    double cc = 0.0;
    for (int i = 0; i < n; ++i) {
        const int k = net.degree(i);
        if (k < 2) continue;
        int links = 0;
        for (const auto& [a, ea] : net.adj[i])
            for (const auto& [b, eb] : net.adj[i])
                if (a < b && net.edge_between(a, b) >= 0) ++links;
        cc += 2.0 * links / (static_cast<double>(k) * (k - 1));
    }
    st.clustering_coefficient = cc / n;
    return st;
}

/// Sample Pearson correlation coefficient.
inline double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw DegenerateInput("pearson: need two equal-length samples of size >= 2");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace vne
