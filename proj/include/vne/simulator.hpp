#pragma once

#include <atomic>
#include <chrono>
#include <queue>
#include <thread>

#include "vne/scenario.hpp"
#include "vne/search.hpp"

namespace vne {

struct SliceRecord {
    int id = 0;
    bool accepted = false;
    double reward = 0.0;
    long long revenue = 0;
    long long cost = 0;
    double wall_ms = 0.0;
    Embedding emb;  // retained for the feasibility oracle
};

struct SimulationReport {
    int arrived = 0;
    int accepted = 0;
    double acceptance = 0.0;
    double rtc_sum = 0.0;   // sum of revenues over sum of costs, accepted slices
    double rtc_mean = 0.0;  // mean of per-slice revenue/cost ratios
    double total_seconds = 0.0;
    std::vector<SliceRecord> slices;

    double mean_ms_per_slice() const {
        if (slices.empty()) return 0.0;
        double t = 0.0;
        for (const auto& r : slices) t += r.wall_ms;
        return t / slices.size();
    }
};

/// Online run over one scenario: arrivals trigger a placement attempt against
/// current residuals, departures free resources. Departures are processed
/// before arrivals with equal timestamps. The run owns its substrate copy and
/// RNG stream, so distinct (config, seed) runs are independent.
inline SimulationReport run_scenario(const Scenario& sc, const AlgoConfig& cfg, uint64_t seed,
                                     SearchCounters* counters = nullptr) {
    PhysicalNetwork net = sc.substrate;
    Rng rng(seed);
    SimulationReport report;
    // (t_depart, slice id) of live slices, earliest first
    std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>>
        departures;

    const auto t0 = std::chrono::steady_clock::now();
    long long sum_revenue = 0, sum_cost = 0;
    double sum_ratio = 0.0;

    for (const SliceRequest& slice : sc.requests) {
        while (!departures.empty() && departures.top().first <= slice.t_arrive) {
            release_embedding(net, departures.top().second);
            departures.pop();
        }
        SliceRecord rec;
        rec.id = slice.id;
        const auto s0 = std::chrono::steady_clock::now();
        PlacementOutcome outcome = main_place(net, slice, cfg, rng, counters);
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s0)
                          .count();
        ++report.arrived;
        if (outcome.accepted) {
            ++report.accepted;
            rec.accepted = true;
            rec.reward = outcome.emb.reward;
            rec.revenue = revenue(slice);
            rec.cost = cost(slice, outcome.emb);
            rec.emb = std::move(outcome.emb);
            sum_revenue += rec.revenue;
            sum_cost += rec.cost;
            sum_ratio += static_cast<double>(rec.revenue) / static_cast<double>(rec.cost);
            if (!std::isinf(slice.t_depart)) departures.push({slice.t_depart, slice.id});
        }
        report.slices.push_back(std::move(rec));
    }
    while (!departures.empty()) {
        release_embedding(net, departures.top().second);
        departures.pop();
    }

    report.acceptance = report.arrived > 0 ? static_cast<double>(report.accepted) / report.arrived : 0.0;
    report.rtc_sum = sum_cost > 0 ? static_cast<double>(sum_revenue) / sum_cost : 0.0;
    report.rtc_mean = report.accepted > 0 ? sum_ratio / report.accepted : 0.0;
    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

struct BatchEntry {
    std::string config_name;
    uint64_t seed = 0;
    SimulationReport report;
};

/// Runs every (config, seed) pair, optionally across threads. Each run is
/// independent; results come back in deterministic (config, seed) order no
/// matter the interleaving.
inline std::vector<BatchEntry> run_batch(const Scenario& sc,
                                         const std::vector<std::pair<std::string, AlgoConfig>>& configs,
                                         const std::vector<uint64_t>& seeds, int jobs = 1) {
    std::vector<BatchEntry> entries(configs.size() * seeds.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= entries.size()) return;
            const auto& [name, cfg] = configs[i / seeds.size()];
            const uint64_t seed = seeds[i % seeds.size()];
            entries[i] = {name, seed, run_scenario(sc, cfg, seed)};
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return entries;
}

struct MetricCI {
    double mean = 0.0;
    double half_width = 0.0;  // 99% normal approximation: 2.576 * s / sqrt(n)
};

inline MetricCI confidence99(const std::vector<double>& xs) {
    MetricCI ci;
    const size_t n = xs.size();
    if (n == 0) return ci;
    for (double x : xs) ci.mean += x;
    ci.mean /= n;
    if (n < 2) return ci;
    double var = 0.0;
    for (double x : xs) var += (x - ci.mean) * (x - ci.mean);
    var /= (n - 1);
    ci.half_width = 2.576 * std::sqrt(var / n);
    return ci;
}

struct Aggregate {
    std::string config_name;
    MetricCI acceptance;
    MetricCI rtc_sum;
    MetricCI rtc_mean;
};

inline std::vector<Aggregate> aggregate_batch(const std::vector<BatchEntry>& entries) {
    std::vector<Aggregate> out;
    std::vector<std::string> names;
    for (const auto& e : entries)
        if (std::find(names.begin(), names.end(), e.config_name) == names.end())
            names.push_back(e.config_name);
    for (const auto& name : names) {
        std::vector<double> acc, rtc_s, rtc_m;
        for (const auto& e : entries) {
            if (e.config_name != name) continue;
            acc.push_back(e.report.acceptance);
            rtc_s.push_back(e.report.rtc_sum);
            rtc_m.push_back(e.report.rtc_mean);
        }
        out.push_back({name, confidence99(acc), confidence99(rtc_s), confidence99(rtc_m)});
    }
    return out;
}

struct OracleResult {
    bool pass = true;
    std::vector<std::string> violations;
};

/// Independent validator: replays the full timeline from scratch with naive
/// counting and re-checks every constraint (CPU and bandwidth bounds,
/// same-slice separation, path contiguity between the mapped hosts) at each
/// slice's time of residence. Violations are collected, not thrown.
inline OracleResult feasibility_oracle(const PhysicalNetwork& initial, const Scenario& sc,
                                       const SimulationReport& report) {
    OracleResult res;
    auto violation = [&](int slice_id, const std::string& what) {
        res.pass = false;
        res.violations.push_back("slice " + std::to_string(slice_id) + ": " + what);
    };

    std::unordered_map<int, const SliceRequest*> slice_by_id;
    for (const auto& s : sc.requests) slice_by_id[s.id] = &s;

    std::vector<long long> cpu_used(initial.node_count(), 0);
    std::vector<long long> bw_used(initial.edge_count(), 0);
    for (int n = 0; n < initial.node_count(); ++n) cpu_used[n] = initial.nodes[n].cpu_occupied;
    for (int e = 0; e < initial.edge_count(); ++e) bw_used[e] = initial.edges[e].bw_occupied;

    struct Event {
        double t;
        int kind;  // 0 departure, 1 arrival: departures first on equal timestamps
        int record_idx;
    };
    std::vector<Event> events;
    for (size_t i = 0; i < report.slices.size(); ++i) {
        const SliceRecord& rec = report.slices[i];
        const auto it = slice_by_id.find(rec.id);
        if (it == slice_by_id.end()) {
            violation(rec.id, "not present in scenario");
            continue;
        }
        events.push_back({it->second->t_arrive, 1, static_cast<int>(i)});
        if (rec.accepted && !std::isinf(it->second->t_depart))
            events.push_back({it->second->t_depart, 0, static_cast<int>(i)});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return a.t < b.t || (a.t == b.t && a.kind < b.kind);
    });

    for (const Event& ev : events) {
        const SliceRecord& rec = report.slices[ev.record_idx];
        const SliceRequest& slice = *slice_by_id.at(rec.id);
        if (!rec.accepted) continue;
        const Embedding& emb = rec.emb;
        const int sign = ev.kind == 1 ? +1 : -1;

        if (ev.kind == 1) {
            if (static_cast<int>(emb.hosts.size()) != slice.size() ||
                emb.link_map.size() != slice.vedges.size()) {
                violation(rec.id, "incomplete embedding recorded as accepted");
                continue;
            }
            std::vector<char> host_seen(initial.node_count(), 0);
            for (int v = 0; v < slice.size(); ++v) {
                const int h = emb.hosts[v];
                if (h < 0 || h >= initial.node_count()) {
                    violation(rec.id, "host out of range");
                    continue;
                }
                if (host_seen[h]) violation(rec.id, "separation: two vnodes share host " + std::to_string(h));
                host_seen[h] = 1;
                if (cpu_used[h] + slice.vnodes[v].cpu_demand > initial.nodes[h].cpu_capacity)
                    violation(rec.id, "cpu over capacity on node " + std::to_string(h));
            }
            for (size_t e = 0; e < slice.vedges.size(); ++e) {
                const auto& path = emb.link_map[e];
                const auto& ve = slice.vedges[e];
                if (path.empty()) {
                    violation(rec.id, "vedge " + std::to_string(e) + " has no path");
                    continue;
                }
                int at = emb.hosts[ve.a];
                bool ok = true;
                for (int pe : path) {
                    if (pe < 0 || pe >= initial.edge_count()) {
                        violation(rec.id, "path uses non-existent edge");
                        ok = false;
                        break;
                    }
                    const auto& edge = initial.edges[pe];
                    if (edge.u != at && edge.v != at) {
                        violation(rec.id, "path not contiguous for vedge " + std::to_string(e));
                        ok = false;
                        break;
                    }
                    at = edge.other(at);
                }
                if (ok && at != emb.hosts[ve.b])
                    violation(rec.id, "path does not end at host for vedge " + std::to_string(e));
                for (int pe : path) {
                    if (pe < 0 || pe >= initial.edge_count()) continue;
                    if (bw_used[pe] + ve.bw_demand > initial.edges[pe].bw_capacity)
                        violation(rec.id, "bw over capacity on edge " + std::to_string(pe));
                    bw_used[pe] += ve.bw_demand;
                }
            }
            for (int v = 0; v < slice.size(); ++v)
                if (emb.hosts[v] >= 0 && emb.hosts[v] < initial.node_count())
                    cpu_used[emb.hosts[v]] += slice.vnodes[v].cpu_demand;
        } else {
            for (int v = 0; v < slice.size(); ++v) cpu_used[emb.hosts[v]] += sign * slice.vnodes[v].cpu_demand;
            for (size_t e = 0; e < slice.vedges.size(); ++e)
                for (int pe : emb.link_map[e]) bw_used[pe] += sign * slice.vedges[e].bw_demand;
        }
    }
    return res;
}

// ---- CSV output ----

inline void write_results_csv(const std::vector<BatchEntry>& entries, std::ostream& out) {
    out << "config,seed,acceptance,rtc_sum,rtc_mean,accepted,arrived,mean_ms_per_slice\n";
    for (const auto& e : entries) {
        out << e.config_name << ',' << e.seed << ',' << e.report.acceptance << ','
            << e.report.rtc_sum << ',' << e.report.rtc_mean << ',' << e.report.accepted << ','
            << e.report.arrived << ',' << e.report.mean_ms_per_slice() << '\n';
    }
}

inline void write_per_slice_csv(const std::vector<BatchEntry>& entries, std::ostream& out) {
    out << "config,seed,slice_id,accepted,reward,revenue,cost,wall_ms\n";
    for (const auto& e : entries)
        for (const auto& r : e.report.slices)
            out << e.config_name << ',' << e.seed << ',' << r.id << ',' << (r.accepted ? 1 : 0)
                << ',' << r.reward << ',' << r.revenue << ',' << r.cost << ',' << r.wall_ms << '\n';
}

}  // namespace vne
