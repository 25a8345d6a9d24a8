#pragma once

#include "vne/mdp.hpp"

namespace fixtures {

inline vne::PhysicalNetwork make_net(int n, const std::vector<std::tuple<int, int, int>>& edges,
                                     int cpu = 100) {
    vne::PhysicalNetwork net;
    for (int i = 0; i < n; ++i) net.add_node(cpu);
    for (const auto& [u, v, bw] : edges) net.add_edge(u, v, bw);
    net.finalize();
    return net;
}

inline vne::SliceRequest make_slice(const std::vector<int>& cpu,
                                    const std::vector<std::tuple<int, int, int>>& vedges) {
    vne::SliceRequest slice;
    for (int c : cpu) slice.vnodes.push_back({c});
    for (const auto& [a, b, bw] : vedges) slice.vedges.push_back({a, b, bw});
    slice.finalize();
    return slice;
}

// Five-node reference substrate shared by the placement tests, 0-based:
// edges {0-3, 2-3, 2-4, 1-2, 1-4, 1-3}.
inline vne::PhysicalNetwork example_net(int cpu = 100, int bw = 100) {
    return make_net(5, {{0, 3, bw}, {2, 3, bw}, {2, 4, bw}, {1, 2, bw}, {1, 4, bw}, {1, 3, bw}},
                    cpu);
}

// Triangle slice with link demands (0,1)=5, (1,2)=10, (0,2)=10.
inline vne::SliceRequest example_slice(int cpu_demand = 1) {
    return make_slice({cpu_demand, cpu_demand, cpu_demand},
                      {{0, 1, 5}, {1, 2, 10}, {0, 2, 10}});
}

}  // namespace fixtures
