#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "vne/graph.hpp"

namespace vne {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Plain edge-list format: one "u v" pair per line, optional bandwidth third
/// column (default 1). Lines starting with '#' are comments. Node ids may be
/// arbitrary integers; they are compacted in sorted order.
inline PhysicalNetwork read_edge_list(const std::string& path, int default_bw = 1,
                                      int default_cpu = 1) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::tuple<int, int, int>> raw;
    std::set<int> ids;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        int u, v;
        if (!(ss >> u)) continue;  // blank line
        if (!(ss >> v)) throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'u v [bw]'");
        int bw = default_bw;
        ss >> bw;
        if (u == v) {
            std::cerr << "warning: " << path << ":" << lineno << ": self loop skipped\n";
            continue;
        }
        raw.emplace_back(u, v, bw);
        ids.insert(u);
        ids.insert(v);
    }
    std::unordered_map<int, int> index;
    PhysicalNetwork net;
    for (int id : ids) index[id] = net.add_node(default_cpu);
    for (const auto& [u, v, bw] : raw) net.add_edge(index[u], index[v], bw);
    net.finalize();
    return net;
}

inline void write_edge_list(const PhysicalNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    for (const auto& e : net.edges) out << e.u << ' ' << e.v << ' ' << e.bw_capacity << '\n';
}

namespace detail {

// Value of key="..." or key='...' inside an XML tag body, if present.
inline std::optional<std::string> xml_attr(const std::string& tag, const std::string& key) {
    size_t pos = 0;
    while ((pos = tag.find(key, pos)) != std::string::npos) {
        // Must be a standalone attribute name followed by '='.
        const bool starts_ok = pos == 0 || std::isspace(static_cast<unsigned char>(tag[pos - 1]));
        size_t after = pos + key.size();
        while (after < tag.size() && std::isspace(static_cast<unsigned char>(tag[after]))) ++after;
        if (!starts_ok || after >= tag.size() || tag[after] != '=') {
            pos += key.size();
            continue;
        }
        ++after;
        while (after < tag.size() && std::isspace(static_cast<unsigned char>(tag[after]))) ++after;
        if (after >= tag.size() || (tag[after] != '"' && tag[after] != '\'')) return std::nullopt;
        const char quote = tag[after];
        const size_t end = tag.find(quote, after + 1);
        if (end == std::string::npos) return std::nullopt;
        return tag.substr(after + 1, end - after - 1);
    }
    return std::nullopt;
}

}  // namespace detail

/// Minimal GraphML reader covering the topology-zoo subset: <node id=...> and
/// <edge source=... target=...> elements. Yields topology only; capacities
/// are placeholders for the caller to assign. Duplicate edges and self loops
/// are dropped with a warning (multigraph files are common in that dataset).
inline PhysicalNetwork read_graphml(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    PhysicalNetwork net;
    std::unordered_map<std::string, int> index;
    int dupes = 0, loops = 0;

    size_t pos = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        const size_t end = text.find('>', pos);
        if (end == std::string::npos) break;
        const std::string tag = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.rfind("node", 0) == 0) {
            auto id = detail::xml_attr(tag, "id");
            if (!id) throw ParseError(path + ": <node> without id");
            if (!index.count(*id)) index[*id] = net.add_node(1);
        } else if (tag.rfind("edge", 0) == 0) {
            auto src = detail::xml_attr(tag, "source");
            auto dst = detail::xml_attr(tag, "target");
            if (!src || !dst) throw ParseError(path + ": <edge> without source/target");
            auto su = index.find(*src);
            auto sv = index.find(*dst);
            if (su == index.end() || sv == index.end())
                throw ParseError(path + ": edge references unknown node");
            if (su->second == sv->second) {
                ++loops;
                continue;
            }
            if (net.edge_between(su->second, sv->second) >= 0) {
                ++dupes;
                continue;
            }
            net.add_edge(su->second, sv->second, 1);
        }
    }
    if (net.node_count() == 0) throw ParseError(path + ": no nodes found");
    if (dupes > 0 || loops > 0)
        std::cerr << "warning: " << path << ": merged " << dupes << " duplicate edge(s), dropped "
                  << loops << " self loop(s)\n";
    net.finalize();
    return net;
}

}  // namespace vne
