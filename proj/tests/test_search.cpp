#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vne/search.hpp"

using namespace vne;

TEST_CASE("simulate returns reward 0 when no host fits the first vnode") {
    auto net = fixtures::make_net(3, {{0, 1, 10}, {1, 2, 10}}, 5);
    auto slice = fixtures::make_slice({50, 1}, {{0, 1, 1}});
    CandidateTable table;  // bypass pruning to exercise the in-rollout dead end
    table.candidates = {{0, 1, 2}, {0, 1, 2}};
    table.order = {0, 1};
    Policy policy(Policy::Init::heuristic, &net, &table);
    Rng rng(1);
    SearchContext ctx{net, slice, table, rng};
    const auto result = simulate(policy, ctx);
    CHECK(result.reward == 0.0);
    CHECK(result.seq.empty());
    CHECK(result.link_map.empty());
}

TEST_CASE("simulate is deterministic under a fixed seed") {
    Rng gen(4);
    auto net = oracle::random_net(10, 0.3, {50, 100}, {50, 100}, gen);
    auto slice = oracle::random_slice(4, 0.4, {1, 25}, {1, 25}, gen);
    auto table = prune_candidates(net, slice);
    Policy policy(Policy::Init::heuristic, &net, &table);

    auto run = [&](uint64_t seed) {
        Rng rng(seed);
        SearchContext ctx{net, slice, table, rng};
        return simulate(policy, ctx).seq;
    };
    CHECK(run(42) == run(42));
}

TEST_CASE("simulate leaves residuals untouched") {
    Rng gen(6);
    auto net = oracle::random_net(10, 0.3, {50, 100}, {50, 100}, gen);
    auto slice = oracle::random_slice(5, 0.4, {1, 25}, {1, 25}, gen);
    auto table = prune_candidates(net, slice);
    Policy policy(Policy::Init::heuristic, &net, &table);
    Rng rng(1);
    SearchContext ctx{net, slice, table, rng};
    const auto nodes0 = net.nodes;
    const auto edges0 = net.edges;
    for (int i = 0; i < 50; ++i) simulate(policy, ctx);
    CHECK(net.nodes.size() == nodes0.size());
    for (size_t i = 0; i < nodes0.size(); ++i) CHECK(net.nodes[i].cpu_occupied == nodes0[i].cpu_occupied);
    for (size_t e = 0; e < edges0.size(); ++e) CHECK(net.edges[e].bw_occupied == edges0[e].bw_occupied);
}

TEST_CASE("rollout action frequencies match the softmax within 2 points") {
    // Two placements of one vnode with adapted (non-uniform) weights.
    auto net = fixtures::make_net(3, {{0, 1, 10}, {1, 2, 10}, {0, 2, 10}});
    auto slice = fixtures::make_slice({1, 1}, {{0, 1, 2}});
    auto table = prune_candidates(net, slice);
    Policy policy(Policy::Init::heuristic, &net, &table);
    Rng rng(12);
    SearchContext ctx{net, slice, table, rng};
    // bias the first step toward one action
    adapt(policy, {0, 1}, ctx);
    adapt(policy, {0, 1}, ctx);

    const auto st = initial_state(net, table);
    const auto w = policy.weights(st, {});
    const auto probs = gibbs_probabilities(w, {0, 1, 2});

    const int trials = 10000;
    std::vector<int> counts(3, 0);
    for (int i = 0; i < trials; ++i) ++counts[simulate(policy, ctx).seq[0]];
    for (int a = 0; a < 3; ++a)
        CHECK(std::abs(counts[a] / double(trials) - probs[a]) < 0.02);
}

TEST_CASE("search performs exactly N^l rollouts") {
    Rng gen(8);
    auto net = oracle::random_net(12, 0.3, {50, 100}, {50, 100}, gen);
    auto slice = oracle::random_slice(4, 0.4, {1, 20}, {1, 20}, gen);
    auto table = prune_candidates(net, slice);

    for (const auto& [n, level] : {std::pair{3, 2}, std::pair{2, 3}}) {
        SearchCounters counters;
        Policy policy(Policy::Init::heuristic, &net, &table);
        Rng rng(5);
        SearchContext ctx{net, slice, table, rng, RewardKind::ratio, &counters};
        nrpa_search(level, n, policy, ctx);
        long long want = 1;
        for (int i = 0; i < level; ++i) want *= n;
        CHECK(counters.simulations == want);
        // adapt runs once per iteration at every level of the recursion
        long long adapts = 0, pow = 1;
        for (int i = 1; i <= level; ++i) {
            pow *= n;
            adapts += pow;
        }
        CHECK(counters.adapts == adapts);
    }

    // level 0 is exactly one rollout
    SearchCounters counters;
    Policy policy(Policy::Init::heuristic, &net, &table);
    Rng rng(5);
    SearchContext ctx{net, slice, table, rng, RewardKind::ratio, &counters};
    nrpa_search(0, 5, policy, ctx);
    CHECK(counters.simulations == 1);
    CHECK(counters.adapts == 0);
}

TEST_CASE("returned reward is the maximum over all leaf rollouts") {
    Rng gen(9);
    auto net = oracle::random_net(10, 0.35, {50, 100}, {50, 100}, gen);
    auto slice = oracle::random_slice(4, 0.4, {1, 20}, {1, 20}, gen);
    auto table = prune_candidates(net, slice);
    Policy policy(Policy::Init::heuristic, &net, &table);
    Rng rng(5);
    RolloutTrace trace;
    SearchContext ctx{net, slice, table, rng, RewardKind::ratio, nullptr, &trace};
    const auto best = nrpa_search(2, 4, policy, ctx);
    double max_seen = 0.0;
    for (const auto& [r, seq] : trace.rollouts) max_seen = std::max(max_seen, r);
    CHECK(best.reward == max_seen);
}

TEST_CASE("main_place rejects impossible slices without searching") {
    auto net = fixtures::make_net(2, {{0, 1, 10}});
    auto big = fixtures::make_slice({1, 1, 1}, {});
    Rng rng(1);
    SearchCounters counters;
    CHECK(!main_place(net, big, default_config(Algo::nepa), rng, &counters).accepted);
    CHECK(counters.simulations == 0);

    PhysicalNetwork zero_cap;
    zero_cap.add_node(0);
    zero_cap.add_node(0);
    zero_cap.add_edge(0, 1, 1);
    zero_cap.finalize();
    auto slice = fixtures::make_slice({1}, {});
    CHECK(!main_place(zero_cap, slice, default_config(Algo::nepa), rng, &counters).accepted);
    CHECK(counters.simulations == 0);
}

TEST_CASE("accepted embeddings pass the independent feasibility check") {
    Rng gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto net = oracle::random_net(12, 0.3, {50, 100}, {50, 100}, gen);
        auto slice = oracle::random_slice(uniform_int(gen, 3, 6), 0.3, {1, 30}, {1, 30}, gen);
        auto clean = net;  // pre-placement residuals for the oracle
        Rng rng(trial);
        AlgoConfig cfg = default_config(Algo::nepa);
        cfg.n = 3;
        cfg.level = 2;
        const auto outcome = main_place(net, slice, cfg, rng);
        if (outcome.accepted) {
            CHECK(oracle::embedding_feasible(clean, slice, outcome.emb));
            CHECK(outcome.emb.reward > 0.0);
            CHECK(outcome.emb.reward <= 1.0);
            // reward 1 exactly when every path is one hop
            bool all_one_hop = true;
            for (const auto& path : outcome.emb.link_map) all_one_hop &= path.size() == 1;
            CHECK((outcome.emb.reward == 1.0) == all_one_hop);
            // committed amounts match the embedding
            CHECK(oracle::occupied_matches_recount(net));
        }
    }
}

TEST_CASE("nepa with an unreachable refinement level equals nrpa bit for bit") {
    Rng gen(21);
    auto net = oracle::random_net(14, 0.3, {50, 100}, {50, 100}, gen);
    auto slice = oracle::random_slice(5, 0.4, {1, 25}, {1, 25}, gen);
    auto table = prune_candidates(net, slice);

    auto run = [&](bool nepa) {
        Policy policy(Policy::Init::heuristic, &net, &table);
        Rng rng(77);
        RolloutTrace trace;
        SearchContext ctx{net, slice, table, rng, RewardKind::ratio, nullptr, &trace};
        RefineConfig cfg{16, 0, 99};  // level above the search: guard never fires
        Embedding best = nepa ? nepa_search(3, 3, policy, ctx, cfg) : nrpa_search(3, 3, policy, ctx);
        return std::pair{best, trace};
    };
    const auto [a, ta] = run(true);
    const auto [b, tb] = run(false);
    CHECK(a.reward == b.reward);
    CHECK(a.seq == b.seq);
    CHECK(a.link_map == b.link_map);
    CHECK(ta.rollouts == tb.rollouts);
}
