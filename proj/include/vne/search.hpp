#pragma once

#include "vne/refine.hpp"
#include "vne/uct.hpp"

namespace vne {

struct IllegalSequence : std::runtime_error {
    explicit IllegalSequence(const std::string& what) : std::runtime_error(what) {}
};

// One recorded rollout, for trajectory diffing in tests.
struct RolloutTrace {
    std::vector<std::pair<double, std::vector<int>>> rollouts;
};

struct SearchContext {
    PhysicalNetwork& net;
    const SliceRequest& slice;
    const CandidateTable& table;
    Rng& rng;
    RewardKind reward_kind = RewardKind::ratio;
    SearchCounters* counters = nullptr;
    RolloutTrace* trace = nullptr;
};

inline std::vector<int> legal_positions(const MdpState& st, const SearchContext& ctx) {
    const int v = ctx.table.current_vnode(st);
    const auto& cands = ctx.table.candidates[v];
    const int demand = ctx.slice.vnodes[v].cpu_demand;
    std::vector<int> pos;
    for (size_t i = 0; i < cands.size(); ++i)
        if (st.placement[cands[i]] == 0 && demand <= ctx.net.cpu_residual(cands[i]))
            pos.push_back(static_cast<int>(i));
    return pos;
}

/// One policy-guided rollout: Gibbs-samples a host for each virtual node in
/// order, then routes the virtual links. Returns reward 0 when the legal set
/// empties before all nodes are placed or when link placement fails. The
/// substrate's occupied amounts are left untouched.
inline Embedding simulate(const Policy& policy, SearchContext& ctx) {
    if (ctx.counters) ++ctx.counters->simulations;
    MdpState st = initial_state(ctx.net, ctx.table);
    Embedding emb;
    while (!ctx.table.terminal(st)) {
        const auto legal = legal_positions(st, ctx);
        if (legal.empty()) {
            emb.hosts = hosts_from_seq(emb.seq, ctx.table, ctx.slice.size());
            if (ctx.trace) ctx.trace->rollouts.push_back({0.0, emb.seq});
            return emb;
        }
        const int v = ctx.table.current_vnode(st);
        const auto weights = policy.weights(st, emb.seq);
        const int pick = gibbs_sample(weights, legal, ctx.rng);
        const int action = ctx.table.candidates[v][legal[pick]];
        apply_action_inplace(st, action, v + 1);
        emb.seq.push_back(action);
    }
    emb.hosts = hosts_from_seq(emb.seq, ctx.table, ctx.slice.size());
    long long* attempts = ctx.counters ? &ctx.counters->link_attempts : nullptr;
    if (auto lm = vlink(ctx.net, ctx.slice, emb.hosts, attempts)) {
        emb.link_map = std::move(*lm);
        emb.reward = embedding_reward(ctx.reward_kind, ctx.net, ctx.slice, emb);
        apply_link_map(ctx.net, ctx.slice, emb.link_map, -1);
    }
    if (ctx.trace) ctx.trace->rollouts.push_back({emb.reward, emb.seq});
    return emb;
}

/// Shifts the policy toward `seq`: replaying it from the initial state, the
/// chosen action's weight gains 1 and every legal action loses its softmax
/// probability (computed from the pre-update weights). Weights are clamped to
/// [-100, 100] to keep the softmax finite over long runs.
inline void adapt(Policy& policy, const std::vector<int>& seq, SearchContext& ctx) {
    if (ctx.counters) ++ctx.counters->adapts;
    constexpr double kClamp = 100.0;
    MdpState st = initial_state(ctx.net, ctx.table);
    std::vector<int> prefix;
    prefix.reserve(seq.size());
    for (int action : seq) {
        const int v = ctx.table.current_vnode(st);
        const auto legal = legal_positions(st, ctx);
        const auto& cands = ctx.table.candidates[v];
        int chosen = -1;
        for (size_t i = 0; i < legal.size(); ++i)
            if (cands[legal[i]] == action) chosen = static_cast<int>(i);
        if (chosen < 0) throw IllegalSequence("adapt: action not legal when replayed");

        auto weights = policy.weights(st, prefix);
        const auto probs = gibbs_probabilities(weights, legal);
        weights[legal[chosen]] += 1.0;
        for (size_t i = 0; i < legal.size(); ++i) weights[legal[i]] -= probs[i];
        for (int p : legal) weights[p] = std::clamp(weights[p], -kClamp, kClamp);
        policy.set_weights(prefix, std::move(weights));

        apply_action_inplace(st, action, v + 1);
        prefix.push_back(action);
    }
}

namespace detail {

// Shared recursion for the nested searches. Level 0 is a rollout; level l
// runs N children at l-1, keeps the running best (ties refresh it), and
// adapts its own policy copy toward the best after every child. When a
// refinement config is given and this is its level, each nonzero incumbent is
// refined before adapting, so adaptation targets the refined sequence.
inline Embedding nested_search(int level, int n_iter, Policy& policy, SearchContext& ctx,
                               const RefineConfig* refine_cfg) {
    if (level == 0) return simulate(policy, ctx);
    Embedding best;
    best.reward = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_iter; ++i) {
        Policy child = policy.child();
        Embedding result = nested_search(level - 1, n_iter, child, ctx, refine_cfg);
        if (best.reward <= result.reward) best = std::move(result);
        if (refine_cfg && level == refine_cfg->level && best.reward > 0.0)
            best = refine(ctx.net, ctx.slice, best, ctx.table, *refine_cfg, ctx.reward_kind,
                          ctx.counters);
        adapt(policy, best.seq, ctx);
    }
    return best;
}

}  // namespace detail

inline Embedding nrpa_search(int level, int n_iter, Policy& policy, SearchContext& ctx) {
    return detail::nested_search(level, n_iter, policy, ctx, nullptr);
}

inline Embedding nepa_search(int level, int n_iter, Policy& policy, SearchContext& ctx,
                             const RefineConfig& cfg) {
    return detail::nested_search(level, n_iter, policy, ctx, &cfg);
}

enum class Algo { nrpa, nrpa_w, nepa, nepa_w, uct };

struct AlgoConfig {
    Algo algo = Algo::nepa;
    int n = 5;
    int level = 3;
    RefineConfig refine{};
    RewardKind reward = RewardKind::ratio;
    int uct_budget = 445;
    double uct_c = 1.4142135623730951;
};

/// Per-algorithm defaults: nepa N=5 l=3 l'=2 K=16 X=|slice|, nrpa N=7 l=3,
/// uct budget 445 c=sqrt(2). The -w variants start all weights at zero
/// instead of the distance heuristic.
inline AlgoConfig default_config(Algo algo) {
    AlgoConfig cfg;
    cfg.algo = algo;
    switch (algo) {
        case Algo::nepa:
        case Algo::nepa_w:
            cfg.n = 5;
            cfg.level = 3;
            cfg.refine = RefineConfig{16, 0, 2};
            break;
        case Algo::nrpa:
        case Algo::nrpa_w:
            cfg.n = 7;
            cfg.level = 3;
            break;
        case Algo::uct:
            break;
    }
    return cfg;
}

inline const char* algo_name(Algo a) {
    switch (a) {
        case Algo::nrpa: return "nrpa";
        case Algo::nrpa_w: return "nrpa-w";
        case Algo::nepa: return "nepa";
        case Algo::nepa_w: return "nepa-w";
        case Algo::uct: return "uct";
    }
    return "?";
}

struct PlacementOutcome {
    bool accepted = false;
    Embedding emb;
};

/// Handles one slice arrival: prunes the action space, runs the configured
/// search against current residuals, and commits the embedding if and only if
/// it scored a strictly positive reward. Rejection is a normal outcome.
inline PlacementOutcome main_place(PhysicalNetwork& net, const SliceRequest& slice,
                                   const AlgoConfig& cfg, Rng& rng,
                                   SearchCounters* counters = nullptr,
                                   RolloutTrace* trace = nullptr) {
    if (slice.size() == 0 || slice.size() > net.node_count()) return {};
    const CandidateTable table = prune_candidates(net, slice);
    for (const auto& cands : table.candidates)
        if (cands.empty()) return {};

    Embedding best;
    if (cfg.algo == Algo::uct) {
        best = uct_search(net, slice, table, cfg.uct_budget, cfg.uct_c, cfg.reward, rng, counters);
    } else {
        const auto init = (cfg.algo == Algo::nrpa_w || cfg.algo == Algo::nepa_w)
                              ? Policy::Init::zero
                              : Policy::Init::heuristic;
        Policy policy(init, &net, &table);
        SearchContext ctx{net, slice, table, rng, cfg.reward, counters, trace};
        if (cfg.algo == Algo::nepa || cfg.algo == Algo::nepa_w)
            best = nepa_search(cfg.level, cfg.n, policy, ctx, cfg.refine);
        else
            best = nrpa_search(cfg.level, cfg.n, policy, ctx);
    }

    if (best.reward > 0.0) {
        commit_embedding(net, slice, best);
        return {true, std::move(best)};
    }
    return {false, std::move(best)};
}

}  // namespace vne
