#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vne/link_place.hpp"

using namespace vne;

TEST_CASE("adjacent hosts with capacity get a one-hop path") {
    auto net = fixtures::make_net(3, {{0, 1, 10}, {1, 2, 10}});
    auto p = bfs_capacity_path(net, 0, 1, 10);
    REQUIRE(p.has_value());
    CHECK(*p == std::vector<int>{0});
}

TEST_CASE("capacity filter can disconnect the endpoints") {
    auto net = fixtures::make_net(3, {{0, 1, 5}, {1, 2, 10}});
    CHECK(!bfs_capacity_path(net, 0, 2, 6).has_value());
    CHECK(bfs_capacity_path(net, 0, 2, 5).has_value());
}

TEST_CASE("3x3 grid corner to corner is four hops") {
    // nodes r*3+c, edges between grid neighbors
    std::vector<std::tuple<int, int, int>> edges;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            if (c + 1 < 3) edges.push_back({r * 3 + c, r * 3 + c + 1, 10});
            if (r + 1 < 3) edges.push_back({r * 3 + c, (r + 1) * 3 + c, 10});
        }
    auto net = fixtures::make_net(9, edges);
    auto p = bfs_capacity_path(net, 0, 8, 10);
    REQUIRE(p.has_value());
    CHECK(static_cast<int>(p->size()) == 4);
    CHECK(static_cast<int>(p->size()) == oracle::shortest_feasible_path_brute(net, 0, 8, 10));
}

TEST_CASE("path lengths are minimal on the filtered graph (random instances)") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = uniform_int(rng, 2, 8);
        auto net = oracle::random_net(n, 0.35, {1, 5}, {1, 20}, rng);
        const int src = uniform_int(rng, 0, n - 1);
        int dst = uniform_int(rng, 0, n - 1);
        if (dst == src) dst = (dst + 1) % n;
        const int bw = uniform_int(rng, 1, 20);
        const auto got = bfs_capacity_path(net, src, dst, bw);
        const int want = oracle::shortest_feasible_path_brute(net, src, dst, bw);
        if (want < 0) {
            CHECK(!got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(static_cast<int>(got->size()) == want);
        }
    }
}

TEST_CASE("vlink reproduces the reference example's path table") {
    auto net = fixtures::example_net();
    auto slice = fixtures::example_slice();
    // vnode hosts from the reference refinement example (0-based): 2, 4, 0
    const std::vector<int> hosts{2, 4, 0};
    auto lm = vlink(net, slice, hosts);
    REQUIRE(lm.has_value());

    auto path_nodes = [&](int vedge, int from) {
        std::vector<int> nodes{from};
        for (int pe : (*lm)[vedge]) nodes.push_back(net.edges[pe].other(nodes.back()));
        return nodes;
    };
    // (0,1): hosts 2 -> 4 on the direct edge
    CHECK(path_nodes(0, 2) == std::vector<int>{2, 4});
    // (1,2): hosts 4 -> 0, three hops via 1 and 3
    CHECK(path_nodes(1, 4) == std::vector<int>{4, 1, 3, 0});
    // (0,2): hosts 2 -> 0, two hops via 3
    CHECK(path_nodes(2, 2) == std::vector<int>{2, 3, 0});

    // bandwidth is left reserved on success; undo restores the network
    CHECK(net.edges[net.edge_between(2, 4)].bw_occupied == 5);
    apply_link_map(net, slice, *lm, -1);
    for (const auto& e : net.edges) CHECK(e.bw_occupied == 0);
}

TEST_CASE("vlink routes by descending demand, ties by index") {
    auto slice = fixtures::make_slice({1, 1, 1}, {{0, 1, 5}, {1, 2, 10}, {0, 2, 10}});
    CHECK(vedges_by_demand(slice) == std::vector<int>{1, 2, 0});
}

TEST_CASE("vlink reserves earlier links before routing later ones") {
    // Link (0,1) demand 10 routes first and shares edge 0-1 with link (0,2)
    // demand 6, which must fit in the remaining capacity 16-10.
    auto net = fixtures::make_net(3, {{0, 1, 16}, {1, 2, 10}});
    auto slice = fixtures::make_slice({1, 1, 1}, {{0, 1, 10}, {0, 2, 6}});
    auto lm = vlink(net, slice, {0, 1, 2});
    REQUIRE(lm.has_value());
    CHECK((*lm)[0] == std::vector<int>{0});
    CHECK((*lm)[1] == std::vector<int>{0, 1});
    CHECK(net.edges[0].bw_occupied == 16);
    apply_link_map(net, slice, *lm, -1);

    // one unit more and the lighter link no longer fits anywhere
    auto tight = fixtures::make_slice({1, 1, 1}, {{0, 1, 10}, {0, 2, 7}});
    CHECK(!vlink(net, tight, {0, 1, 2}).has_value());
    for (const auto& e : net.edges) CHECK(e.bw_occupied == 0);
}

TEST_CASE("vlink failure rolls every reservation back") {
    // second link cannot fit: demand 10 but the only remaining capacity is 4
    auto net = fixtures::make_net(3, {{0, 1, 12}, {1, 2, 4}});
    auto slice = fixtures::make_slice({1, 1, 1}, {{0, 1, 12}, {1, 2, 10}});
    const std::vector<int> hosts{0, 1, 2};
    long long attempts = 0;
    auto lm = vlink(net, slice, hosts, &attempts);
    CHECK(!lm.has_value());
    CHECK(attempts == 2);
    for (const auto& e : net.edges) CHECK(e.bw_occupied == 0);
}

TEST_CASE("demand above every incident residual of one host fails fast") {
    auto net = fixtures::make_net(3, {{0, 1, 5}, {1, 2, 5}});
    auto slice = fixtures::make_slice({1, 1}, {{0, 1, 50}});
    auto lm = vlink(net, slice, {0, 2});
    CHECK(!lm.has_value());
    for (const auto& e : net.edges) CHECK(e.bw_occupied == 0);
}
