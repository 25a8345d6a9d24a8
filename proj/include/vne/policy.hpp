#pragma once

#include <cstdint>
#include <unordered_map>

#include "vne/mdp.hpp"
#include "vne/rng.hpp"

namespace vne {

/// Heuristic initial weight for placing the next virtual node on `action`:
/// minus the mean hop distance from `action` to the physical nodes already
/// used by this slice, or 1/n when nothing is placed yet. Closer nodes get
/// higher weights, biasing rollouts toward clustered placements.
inline double weight_init(const MdpState& st, int action,
                          const std::vector<std::vector<int>>& dist) {
    const int n = static_cast<int>(st.placement.size());
    long long sum = 0;
    int placed = 0;
    for (int i = 0; i < n; ++i) {
        if (st.placement[i] != 0) {
            sum += dist[i][action];
            ++placed;
        }
    }
    if (placed == 0) return 1.0 / n;
    return -static_cast<double>(sum) / placed;
}

// Key: the action prefix that led to the state. Under the fixed vnode order
// it identifies the placement vector exactly.
struct PrefixHash {
    size_t operator()(const std::vector<int>& prefix) const {
        uint64_t h = 1469598103934665603ull;
        for (int a : prefix) {
            h ^= static_cast<uint64_t>(a) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

/// Weight table mapping (state, action) to a real, sampled via softmax during
/// rollouts and shifted toward good sequences by adapt(). Weights are created
/// lazily on first use: from the distance heuristic above, or all zero in
/// `zero` mode.
///
/// A search level that wants a private copy calls child(); reads fall through
/// to the parent chain, writes stay local and vanish with the child. The
/// parent must outlive its children and must not be adapted while a child is
/// alive, which the recursion guarantees.
class Policy {
public:
    enum class Init { heuristic, zero };

    Policy(Init mode, const PhysicalNetwork* net, const CandidateTable* table)
        : mode_(mode), net_(net), table_(table) {}

    Policy child() const {
        Policy c(mode_, net_, table_);
        c.parent_ = this;
        return c;
    }

    Init init_mode() const { return mode_; }

    /// Effective weights for the state reached through `prefix`, aligned with
    /// the candidate list of the virtual node to place next.
    std::vector<double> weights(const MdpState& st, const std::vector<int>& prefix) const {
        if (const std::vector<double>* w = find(prefix)) return *w;
        const auto& cands = table_->candidates[table_->current_vnode(st)];
        std::vector<double> w(cands.size(), 0.0);
        if (mode_ == Init::heuristic)
            for (size_t i = 0; i < cands.size(); ++i) w[i] = weight_init(st, cands[i], net_->dist);
        return w;
    }

    void set_weights(const std::vector<int>& prefix, std::vector<double> w) {
        local_[prefix] = std::move(w);
    }

    // Number of states adapted at this level (diagnostics and tests).
    size_t local_size() const { return local_.size(); }

    const CandidateTable& table() const { return *table_; }
    const PhysicalNetwork& net() const { return *net_; }

private:
    const std::vector<double>* find(const std::vector<int>& prefix) const {
        for (const Policy* p = this; p != nullptr; p = p->parent_) {
            auto it = p->local_.find(prefix);
            if (it != p->local_.end()) return &it->second;
        }
        return nullptr;
    }

    const Policy* parent_ = nullptr;
    Init mode_;
    const PhysicalNetwork* net_;
    const CandidateTable* table_;
    std::unordered_map<std::vector<int>, std::vector<double>, PrefixHash> local_;
};

/// Softmax probabilities over the legal subset of a state's candidate list.
/// `legal_pos` holds positions into the weight vector. Weights are shifted by
/// their maximum before exponentiation, so adding a constant to all weights
/// of a state leaves the distribution unchanged.
inline std::vector<double> gibbs_probabilities(const std::vector<double>& weights,
                                               const std::vector<int>& legal_pos) {
    double wmax = -std::numeric_limits<double>::infinity();
    for (int p : legal_pos) wmax = std::max(wmax, weights[p]);
    std::vector<double> probs(legal_pos.size());
    double denom = 0.0;
    for (size_t i = 0; i < legal_pos.size(); ++i) {
        probs[i] = std::exp(weights[legal_pos[i]] - wmax);
        denom += probs[i];
    }
    for (double& p : probs) p /= denom;
    return probs;
}

/// Draws one position index from legal_pos with softmax probability.
inline int gibbs_sample(const std::vector<double>& weights, const std::vector<int>& legal_pos,
                        Rng& rng) {
    const auto probs = gibbs_probabilities(weights, legal_pos);
    const double u = uniform01(rng);
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;  // guard against rounding
}

}  // namespace vne
