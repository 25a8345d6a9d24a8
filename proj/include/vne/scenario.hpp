#pragma once

#include <json.hpp>

#include "vne/io.hpp"
#include "vne/mdp.hpp"
#include "vne/rng.hpp"

namespace vne {

struct GenerationFailure : std::runtime_error {
    explicit GenerationFailure(const std::string& what) : std::runtime_error(what) {}
};
struct DisconnectedTopology : std::runtime_error {
    explicit DisconnectedTopology(const std::string& what) : std::runtime_error(what) {}
};

struct IntRange {
    int lo = 0;
    int hi = 0;
    int sample(Rng& rng) const { return uniform_int(rng, lo, hi); }
};

/// A substrate plus a time-ordered stream of slice requests. For perfectly
/// solvable instances the generating assignment (host per vnode, per slice)
/// is kept as a certificate.
struct Scenario {
    PhysicalNetwork substrate;
    std::vector<SliceRequest> requests;
    std::vector<std::vector<int>> certificate;  // empty unless constructed solvable
};

namespace detail {

inline bool edges_connected(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n == 0) return true;
    std::vector<std::vector<int>> adj(n);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> vis(n, 0);
    std::deque<int> q{0};
    vis[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        const int x = q.front();
        q.pop_front();
        for (int nb : adj[x])
            if (!vis[nb]) {
                vis[nb] = 1;
                ++cnt;
                q.push_back(nb);
            }
    }
    return cnt == n;
}

struct GeometricGraph {
    std::vector<double> x, y;
    std::vector<std::pair<int, int>> edges;
};

// Random geometric structure: nodes at uniform points in the unit square,
// edge (u,v) with probability alpha * exp(-dist(u,v) / (beta * L)) where L is
// the maximum pairwise distance of the draw.
inline GeometricGraph waxman_draw(int n, double alpha, double beta, Rng& rng) {
    GeometricGraph g;
    g.x.resize(n);
    g.y.resize(n);
    for (int i = 0; i < n; ++i) {
        g.x[i] = uniform01(rng);
        g.y[i] = uniform01(rng);
    }
    double L = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            L = std::max(L, std::hypot(g.x[i] - g.x[j], g.y[i] - g.y[j]));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = std::hypot(g.x[i] - g.x[j], g.y[i] - g.y[j]);
            const double p = L > 0 ? alpha * std::exp(-d / (beta * L)) : alpha;
            if (uniform01(rng) < p) g.edges.push_back({i, j});
        }
    }
    return g;
}

inline std::vector<std::pair<int, int>> waxman_edges(int n, double alpha, double beta, Rng& rng) {
    return waxman_draw(n, alpha, beta, rng).edges;
}

// Joins the components of a geometric draw by repeatedly adding an edge
// between the closest inter-component node pair (ties by lowest ids). Small
// Waxman graphs come out connected so rarely that rejection sampling is
// hopeless; this keeps the drawn edges and adds the minimal geometric patch.
inline void connect_components_geometrically(GeometricGraph& g, int n) {
    for (;;) {
        std::vector<int> comp(n, -1);
        std::vector<std::vector<int>> adj(n);
        for (const auto& [u, v] : g.edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        int n_comp = 0;
        for (int s = 0; s < n; ++s) {
            if (comp[s] >= 0) continue;
            comp[s] = n_comp;
            std::deque<int> q{s};
            while (!q.empty()) {
                const int x = q.front();
                q.pop_front();
                for (int nb : adj[x])
                    if (comp[nb] < 0) {
                        comp[nb] = n_comp;
                        q.push_back(nb);
                    }
            }
            ++n_comp;
        }
        if (n_comp <= 1) return;
        int bu = -1, bv = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (comp[i] == comp[j]) continue;
                const double d = std::hypot(g.x[i] - g.x[j], g.y[i] - g.y[j]);
                if (d < bd) {
                    bd = d;
                    bu = i;
                    bv = j;
                }
            }
        g.edges.push_back({bu, bv});
    }
}

inline std::vector<std::pair<int, int>> er_edges(int n, double p, Rng& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) edges.push_back({i, j});
    return edges;
}

constexpr int kConnectAttempts = 1000;

template <typename EdgeGen>
std::vector<std::pair<int, int>> connected_structure(int n, EdgeGen gen, Rng& rng,
                                                     const char* kind) {
    for (int attempt = 0; attempt < kConnectAttempts; ++attempt) {
        auto edges = gen(rng);
        if (edges_connected(n, edges)) return edges;
    }
    throw GenerationFailure(std::string(kind) + ": no connected graph after " +
                            std::to_string(kConnectAttempts) + " attempts");
}

inline PhysicalNetwork assemble_substrate(int n, const std::vector<std::pair<int, int>>& edges,
                                          IntRange cpu, IntRange bw, Rng& rng) {
    PhysicalNetwork net;
    for (int i = 0; i < n; ++i) net.add_node(cpu.sample(rng));
    for (const auto& [u, v] : edges) net.add_edge(u, v, bw.sample(rng));
    net.finalize();
    return net;
}

}  // namespace detail

/// Connected Waxman substrate with integer capacities drawn uniformly from
/// the given ranges. Resamples the whole structure until connected.
inline PhysicalNetwork gen_waxman(int n, double alpha, double beta, IntRange cpu, IntRange bw,
                                  Rng& rng) {
    if (n < 2) throw std::invalid_argument("gen_waxman: need n >= 2");
    auto edges = detail::connected_structure(
        n, [&](Rng& r) { return detail::waxman_edges(n, alpha, beta, r); }, rng, "waxman");
    return detail::assemble_substrate(n, edges, cpu, bw, rng);
}

inline PhysicalNetwork gen_er(int n, double p, IntRange cpu, IntRange bw, Rng& rng) {
    if (n < 2 || p <= 0.0 || p > 1.0) throw std::invalid_argument("gen_er: bad parameters");
    auto edges = detail::connected_structure(
        n, [&](Rng& r) { return detail::er_edges(n, p, r); }, rng, "erdos-renyi");
    return detail::assemble_substrate(n, edges, cpu, bw, rng);
}

/// Connected Waxman slice graph with integer demands. One structural draw,
/// made connected by the geometric component patch (see above).
inline SliceRequest gen_slice_graph(int n, double alpha, double beta, IntRange cpu_demand,
                                    IntRange bw_demand, Rng& rng) {
    SliceRequest slice;
    if (n == 1) {
        slice.vnodes.push_back({cpu_demand.sample(rng)});
        slice.finalize();
        return slice;
    }
    auto g = detail::waxman_draw(n, alpha, beta, rng);
    detail::connect_components_geometrically(g, n);
    for (int i = 0; i < n; ++i) slice.vnodes.push_back({cpu_demand.sample(rng)});
    for (const auto& [a, b] : g.edges) slice.vedges.push_back({a, b, bw_demand.sample(rng)});
    slice.finalize();
    return slice;
}

struct SliceStreamConfig {
    int count = 500;
    IntRange size{7, 13};
    IntRange cpu_demand{1, 50};
    IntRange bw_demand{1, 50};
    double waxman_alpha = 0.5;
    double waxman_beta = 0.2;
    double lambda = 0.02;  // arrival rate, per second
    double mu = 0.005;     // departure rate, per second
};

/// Poisson arrival process: exponential inter-arrival times at rate lambda,
/// exponential lifetimes at rate mu, sizes uniform in range.
inline std::vector<SliceRequest> gen_slice_stream(const SliceStreamConfig& cfg, Rng& rng) {
    std::vector<SliceRequest> out;
    out.reserve(cfg.count);
    double t = 0.0;
    for (int i = 0; i < cfg.count; ++i) {
        const int size = cfg.size.sample(rng);
        SliceRequest slice = gen_slice_graph(size, cfg.waxman_alpha, cfg.waxman_beta,
                                             cfg.cpu_demand, cfg.bw_demand, rng);
        slice.id = i;
        t += exponential(rng, cfg.lambda);
        slice.t_arrive = t;
        slice.t_depart = t + exponential(rng, cfg.mu);
        out.push_back(std::move(slice));
    }
    return out;
}

/// Arrivals-only instance built so that a known assignment packs every slice
/// and leaves zero residual resources. Slices are generated first; the
/// substrate is grown by walking each slice's nodes, reusing an existing host
/// with probability reuse_prob (never two vnodes of one slice on a host) and
/// adding capacities equal to the assigned demands. The generating assignment
/// is returned as the scenario certificate.
inline Scenario gen_pss(int index, int n_slices, double reuse_prob, Rng& rng,
                        IntRange cpu_demand = {1, 50}, IntRange bw_demand = {1, 50},
                        double alpha = 0.5, double beta = 0.2) {
    if (reuse_prob < 0.0 || reuse_prob >= 1.0)
        throw std::invalid_argument("gen_pss: reuse probability must be in [0, 1)");
    Scenario sc;
    const IntRange size{7 + index, 10 + index};
    for (int i = 0; i < n_slices; ++i) {
        SliceRequest slice = gen_slice_graph(size.sample(rng), alpha, beta, cpu_demand, bw_demand, rng);
        slice.id = i;
        slice.t_arrive = static_cast<double>(i);
        slice.t_depart = std::numeric_limits<double>::infinity();
        sc.requests.push_back(std::move(slice));
    }

    std::vector<int> cpu_total;  // capacity accumulated per created node
    std::vector<std::tuple<int, int, int>> edge_total;
    auto edge_slot = [&](int u, int v) -> int& {
        for (auto& [a, b, bw] : edge_total)
            if ((a == u && b == v) || (a == v && b == u)) return bw;
        edge_total.emplace_back(u, v, 0);
        return std::get<2>(edge_total.back());
    };

    for (const auto& slice : sc.requests) {
        std::vector<int> hosts(slice.size(), -1);
        std::vector<char> used(cpu_total.size(), 0);
        for (int v = 0; v < slice.size(); ++v) {
            std::vector<int> eligible;
            for (size_t p = 0; p < cpu_total.size(); ++p)
                if (!used[p]) eligible.push_back(static_cast<int>(p));
            const bool reuse = uniform01(rng) < reuse_prob;
            int host;
            if (reuse && !eligible.empty()) {
                host = eligible[uniform_int(rng, 0, static_cast<int>(eligible.size()) - 1)];
            } else {
                host = static_cast<int>(cpu_total.size());
                cpu_total.push_back(0);
                used.push_back(0);
            }
            used[host] = 1;
            hosts[v] = host;
            cpu_total[host] += slice.vnodes[v].cpu_demand;
        }
        for (const auto& ve : slice.vedges)
            edge_slot(hosts[ve.a], hosts[ve.b]) += ve.bw_demand;
        sc.certificate.push_back(std::move(hosts));
    }

    for (int cap : cpu_total) sc.substrate.add_node(cap);
    for (const auto& [u, v, bw] : edge_total) sc.substrate.add_edge(u, v, bw);
    sc.substrate.finalize();
    return sc;
}

/// Commits every slice through the certificate assignment, mapping each
/// virtual link onto the single physical edge created for it. On a freshly
/// generated solvable scenario this zeroes all residuals.
inline void commit_certificate(PhysicalNetwork& net, const Scenario& sc) {
    if (sc.certificate.size() != sc.requests.size())
        throw std::invalid_argument("commit_certificate: no certificate");
    for (size_t i = 0; i < sc.requests.size(); ++i) {
        const SliceRequest& slice = sc.requests[i];
        Embedding emb;
        emb.hosts = sc.certificate[i];
        emb.link_map.resize(slice.vedges.size());
        for (size_t e = 0; e < slice.vedges.size(); ++e) {
            const int pe = net.edge_between(emb.hosts[slice.vedges[e].a], emb.hosts[slice.vedges[e].b]);
            if (pe < 0) throw std::invalid_argument("commit_certificate: certificate edge missing");
            emb.link_map[e] = {pe};
        }
        commit_embedding(net, slice, emb);
    }
}

/// Real topology with randomized capacities in the given ranges.
inline PhysicalNetwork load_zoo(const std::string& path, IntRange bw, IntRange cpu, Rng& rng) {
    PhysicalNetwork net = read_graphml(path);
    if (!net.connected()) throw DisconnectedTopology(path + ": topology is not connected");
    for (auto& node : net.nodes) node.cpu_capacity = cpu.sample(rng);
    for (auto& edge : net.edges) edge.bw_capacity = bw.sample(rng);
    return net;
}

// ---- scenario JSON (the published-instances format) ----

inline nlohmann::json scenario_to_json(const Scenario& sc) {
    nlohmann::json j;
    auto& nodes = j["substrate"]["nodes"] = nlohmann::json::array();
    for (const auto& n : sc.substrate.nodes) nodes.push_back({{"cpu", n.cpu_capacity}});
    auto& edges = j["substrate"]["edges"] = nlohmann::json::array();
    for (const auto& e : sc.substrate.edges)
        edges.push_back({{"u", e.u}, {"v", e.v}, {"bw", e.bw_capacity}});
    auto& slices = j["slices"] = nlohmann::json::array();
    for (const auto& s : sc.requests) {
        nlohmann::json js;
        js["id"] = s.id;
        js["t_arrive"] = s.t_arrive;
        if (std::isinf(s.t_depart))
            js["t_depart"] = nullptr;
        else
            js["t_depart"] = s.t_depart;
        js["vnodes"] = nlohmann::json::array();
        for (const auto& vn : s.vnodes) js["vnodes"].push_back({{"cpu", vn.cpu_demand}});
        js["vedges"] = nlohmann::json::array();
        for (const auto& ve : s.vedges)
            js["vedges"].push_back({{"a", ve.a}, {"b", ve.b}, {"bw", ve.bw_demand}});
        slices.push_back(std::move(js));
    }
    if (!sc.certificate.empty()) j["pss_certificate"] = sc.certificate;
    return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    try {
        for (const auto& jn : j.at("substrate").at("nodes"))
            sc.substrate.add_node(jn.at("cpu").get<int>());
        for (const auto& je : j.at("substrate").at("edges"))
            sc.substrate.add_edge(je.at("u").get<int>(), je.at("v").get<int>(), je.at("bw").get<int>());
        sc.substrate.finalize();
        for (const auto& js : j.at("slices")) {
            SliceRequest s;
            s.id = js.at("id").get<int>();
            s.t_arrive = js.at("t_arrive").get<double>();
            const auto& td = js.at("t_depart");
            s.t_depart = td.is_null() ? std::numeric_limits<double>::infinity() : td.get<double>();
            if (s.t_arrive >= s.t_depart) throw ParseError("slice must depart after arriving");
            for (const auto& jn : js.at("vnodes")) s.vnodes.push_back({jn.at("cpu").get<int>()});
            for (const auto& je : js.at("vedges"))
                s.vedges.push_back(
                    {je.at("a").get<int>(), je.at("b").get<int>(), je.at("bw").get<int>()});
            s.finalize();
            sc.requests.push_back(std::move(s));
        }
        if (j.contains("pss_certificate"))
            sc.certificate = j.at("pss_certificate").get<std::vector<std::vector<int>>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("scenario json: ") + e.what());
    }
    std::stable_sort(sc.requests.begin(), sc.requests.end(),
                     [](const SliceRequest& a, const SliceRequest& b) { return a.t_arrive < b.t_arrive; });
    return sc;
}

inline void write_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << scenario_to_json(sc).dump(2) << '\n';
}

inline Scenario read_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace vne
