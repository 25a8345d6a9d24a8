#pragma once

#include <memory>

#include "vne/link_place.hpp"
#include "vne/policy.hpp"
#include "vne/refine.hpp"

namespace vne {

struct UctNode {
    int visits = 0;
    double total_reward = 0.0;
    std::vector<int> untried;  // legal actions not yet expanded
    std::vector<std::pair<int, std::unique_ptr<UctNode>>> children;

    double mean() const { return visits > 0 ? total_reward / visits : 0.0; }
};

// Optional introspection of a finished search, for invariant checks.
struct UctStats {
    long long playouts = 0;
    int root_children = 0;
    int root_visits = 0;
    double root_mean = 0.0;
    std::vector<double> playout_rewards;
};

namespace detail {

inline std::vector<int> uct_legal(const MdpState& st, const PhysicalNetwork& net,
                                  const SliceRequest& slice, const CandidateTable& table) {
    if (table.terminal(st)) return {};
    return legal_actions(st, net, slice, table);
}

}  // namespace detail

/// Upper-confidence tree search over the same placement process, budgeted by
/// virtual-link routing attempts. Each playout selects by UCB1 (unexpanded
/// actions first), expands one node, finishes with a uniform random rollout,
/// scores it through link placement, and backpropagates the mean. Returns the
/// best complete embedding seen; its reward is 0 if none succeeded.
inline Embedding uct_search(PhysicalNetwork& net, const SliceRequest& slice,
                            const CandidateTable& table, int budget, double exploration,
                            RewardKind kind, Rng& rng, SearchCounters* counters = nullptr,
                            UctStats* stats = nullptr) {
    Embedding best;
    if (slice.size() == 0) return best;

    const MdpState root_state = initial_state(net, table);
    UctNode root;
    root.untried = detail::uct_legal(root_state, net, slice, table);

    long long attempts = 0;
    // Dead-end playouts consume no routing budget, so a generous iteration
    // cap guarantees termination on unplaceable slices.
    const long long max_playouts = std::max<long long>(1000, 50LL * budget);

    for (long long playout = 0; attempts < budget && playout < max_playouts; ++playout) {
        MdpState st = root_state;
        std::vector<int> seq;
        std::vector<UctNode*> path{&root};
        UctNode* node = &root;

        // Selection and single expansion.
        while (!table.terminal(st)) {
            if (!node->untried.empty()) {
                const int idx = uniform_int(rng, 0, static_cast<int>(node->untried.size()) - 1);
                const int action = node->untried[idx];
                node->untried.erase(node->untried.begin() + idx);
                apply_action_inplace(st, action, table.current_vnode(st) + 1);
                seq.push_back(action);
                node->children.emplace_back(action, std::make_unique<UctNode>());
                node = node->children.back().second.get();
                node->untried = detail::uct_legal(st, net, slice, table);
                path.push_back(node);
                break;
            }
            if (node->children.empty()) break;  // dead end: no legal action existed here
            UctNode* pick = nullptr;
            int pick_action = -1;
            double pick_score = -std::numeric_limits<double>::infinity();
            for (const auto& [action, child] : node->children) {
                const double ucb =
                    child->mean() + exploration * std::sqrt(std::log(static_cast<double>(node->visits)) /
                                                            child->visits);
                if (ucb > pick_score || (ucb == pick_score && action < pick_action)) {
                    pick_score = ucb;
                    pick = child.get();
                    pick_action = action;
                }
            }
            apply_action_inplace(st, pick_action, table.current_vnode(st) + 1);
            seq.push_back(pick_action);
            node = pick;
            path.push_back(node);
        }

        // Uniform random rollout to a terminal state.
        while (!table.terminal(st)) {
            const auto legal = detail::uct_legal(st, net, slice, table);
            if (legal.empty()) break;
            const int action = legal[uniform_int(rng, 0, static_cast<int>(legal.size()) - 1)];
            apply_action_inplace(st, action, table.current_vnode(st) + 1);
            seq.push_back(action);
        }

        double reward = 0.0;
        if (table.terminal(st)) {
            Embedding emb;
            emb.seq = seq;
            emb.hosts = hosts_from_seq(seq, table, slice.size());
            if (auto lm = vlink(net, slice, emb.hosts, &attempts)) {
                emb.link_map = std::move(*lm);
                reward = embedding_reward(kind, net, slice, emb);
                emb.reward = reward;
                apply_link_map(net, slice, emb.link_map, -1);
                if (reward > best.reward) best = std::move(emb);
            }
        }

        for (UctNode* n : path) {
            ++n->visits;
            n->total_reward += reward;
        }
        if (stats) stats->playout_rewards.push_back(reward);
    }

    if (counters) counters->link_attempts += attempts;
    if (stats) {
        stats->playouts = static_cast<long long>(stats->playout_rewards.size());
        stats->root_children = static_cast<int>(root.children.size());
        stats->root_visits = root.visits;
        stats->root_mean = root.mean();
    }
    return best;
}

}  // namespace vne
