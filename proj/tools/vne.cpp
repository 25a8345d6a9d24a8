// Command line front end: scenario generation, batch solver runs, topology
// statistics. Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "vne/simulator.hpp"

namespace {

using namespace vne;

int default_jobs() {
    if (const char* env = std::getenv("VNE_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 1;
}

struct GenerateOpts {
    std::string kind;
    std::string out = "scenario.json";
    std::string zoo_file;
    uint64_t seed = 1;
    int n = 75;
    double alpha = 0.5, beta = 0.2;
    double p = 0.03;
    int slices = -1;  // default depends on kind: 500, or 100 for pss
    int size_min = 7, size_max = 13;
    int demand_min = 1, demand_max = 50;
    int cpu_min = 50, cpu_max = 100;
    int bw_min = 50, bw_max = 100;
    double lambda = 0.02, mu = 0.005;
    int pss_index = 0;
    double reuse = 0.93;
};

int cmd_generate(const GenerateOpts& o) {
    if (o.size_min < 1 || o.size_min > o.size_max || o.demand_min < 1 ||
        o.demand_min > o.demand_max || o.cpu_min < 1 || o.cpu_min > o.cpu_max || o.bw_min < 1 ||
        o.bw_min > o.bw_max || o.lambda <= 0 || o.mu <= 0) {
        std::cerr << "error: invalid ranges or rates\n";
        return 1;
    }
    Rng rng(o.seed);
    Scenario sc;
    const int slices = o.slices > 0 ? o.slices : (o.kind == "pss" ? 100 : 500);
    const IntRange cpu{o.cpu_min, o.cpu_max}, bw{o.bw_min, o.bw_max};
    SliceStreamConfig stream;
    stream.count = slices;
    stream.size = {o.size_min, o.size_max};
    stream.cpu_demand = {o.demand_min, o.demand_max};
    stream.bw_demand = {o.demand_min, o.demand_max};
    stream.waxman_alpha = o.alpha;
    stream.waxman_beta = o.beta;
    stream.lambda = o.lambda;
    stream.mu = o.mu;

    if (o.kind == "waxman") {
        sc.substrate = gen_waxman(o.n, o.alpha, o.beta, cpu, bw, rng);
        sc.requests = gen_slice_stream(stream, rng);
    } else if (o.kind == "er") {
        sc.substrate = gen_er(o.n, o.p, cpu, bw, rng);
        sc.requests = gen_slice_stream(stream, rng);
    } else if (o.kind == "pss") {
        sc = gen_pss(o.pss_index, slices, o.reuse, rng, {o.demand_min, o.demand_max},
                     {o.demand_min, o.demand_max}, o.alpha, o.beta);
    } else if (o.kind == "zoo") {
        if (o.zoo_file.empty()) {
            std::cerr << "error: --file is required for kind 'zoo'\n";
            return 1;
        }
        sc.substrate = load_zoo(o.zoo_file, bw, cpu, rng);
        sc.requests = gen_slice_stream(stream, rng);
    } else {
        std::cerr << "error: unknown kind '" << o.kind << "' (waxman|er|pss|zoo)\n";
        return 1;
    }

    write_scenario(sc, o.out);
    std::cout << "wrote " << o.out << ": |V|=" << sc.substrate.node_count()
              << " |E|=" << sc.substrate.edge_count() << " slices=" << sc.requests.size() << "\n";
    return 0;
}

struct RunOpts {
    std::string scenario_path;
    std::string algo = "nepa";
    std::string out = "results.csv";
    std::string per_slice;
    std::string reward = "rc";
    int n = -1;
    int level = -1;
    int refine_level = -1;
    int k = -1;
    int x = -1;
    int budget = -1;
    double c = -1.0;
    int seeds = 10;
    uint64_t seed_base = 1;
    int jobs = default_jobs();
};

std::optional<Algo> parse_algo(const std::string& s) {
    if (s == "nrpa") return Algo::nrpa;
    if (s == "nrpa-w") return Algo::nrpa_w;
    if (s == "nepa") return Algo::nepa;
    if (s == "nepa-w") return Algo::nepa_w;
    if (s == "uct") return Algo::uct;
    return std::nullopt;
}

int cmd_run(const RunOpts& o) {
    const auto algo = parse_algo(o.algo);
    if (!algo) {
        std::cerr << "error: unknown algo '" << o.algo << "' (nepa|nepa-w|nrpa|nrpa-w|uct)\n";
        return 1;
    }
    AlgoConfig cfg = default_config(*algo);
    if (o.n > 0) cfg.n = o.n;
    if (o.level >= 0) cfg.level = o.level;
    if (o.refine_level >= 0) cfg.refine.level = o.refine_level;
    if (o.k > 0) cfg.refine.k = o.k;
    if (o.x >= 0) cfg.refine.x = o.x;
    if (o.budget > 0) cfg.uct_budget = o.budget;
    if (o.c > 0) cfg.uct_c = o.c;
    if (o.reward == "afbd")
        cfg.reward = RewardKind::afbd;
    else if (o.reward != "rc") {
        std::cerr << "error: unknown reward '" << o.reward << "' (rc|afbd)\n";
        return 1;
    }
    if (o.seeds < 1) {
        std::cerr << "error: --seeds must be >= 1\n";
        return 1;
    }

    // Echo the effective configuration so every run is reproducible from its
    // header alone.
    std::cerr << "config: algo=" << algo_name(cfg.algo) << " n=" << cfg.n << " level=" << cfg.level;
    if (cfg.algo == Algo::nepa || cfg.algo == Algo::nepa_w)
        std::cerr << " refine-level=" << cfg.refine.level << " k=" << cfg.refine.k
                  << " x=" << (cfg.refine.x > 0 ? std::to_string(cfg.refine.x) : std::string("|Vx|"));
    if (cfg.algo == Algo::uct) std::cerr << " budget=" << cfg.uct_budget << " c=" << cfg.uct_c;
    std::cerr << " reward=" << (cfg.reward == RewardKind::ratio ? "rc" : "afbd")
              << " seeds=" << o.seeds << " seed-base=" << o.seed_base << " jobs=" << o.jobs << "\n";

    const Scenario sc = read_scenario(o.scenario_path);
    std::vector<uint64_t> seeds;
    for (int i = 0; i < o.seeds; ++i) seeds.push_back(o.seed_base + static_cast<uint64_t>(i));

    const auto entries = run_batch(sc, {{algo_name(cfg.algo), cfg}}, seeds, o.jobs);

    std::ofstream out(o.out);
    if (!out) throw ParseError("cannot open " + o.out + " for writing");
    write_results_csv(entries, out);
    if (!o.per_slice.empty()) {
        std::ofstream ps(o.per_slice);
        if (!ps) throw ParseError("cannot open " + o.per_slice + " for writing");
        write_per_slice_csv(entries, ps);
    }

    for (const auto& agg : aggregate_batch(entries)) {
        std::cout << agg.config_name << ": acceptance " << agg.acceptance.mean << " +- "
                  << agg.acceptance.half_width << " (99% CI), rtc_sum " << agg.rtc_sum.mean
                  << " +- " << agg.rtc_sum.half_width << ", rtc_mean " << agg.rtc_mean.mean
                  << " +- " << agg.rtc_mean.half_width << "\n";
    }
    std::cout << "wrote " << o.out << " (" << entries.size() << " rows)\n";
    return 0;
}

int cmd_stats(const std::string& path, const std::string& csv_out) {
    PhysicalNetwork net;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        net = read_scenario(path).substrate;
    else if (path.find(".graphml") != std::string::npos || path.find(".xml") != std::string::npos)
        net = read_graphml(path);
    else
        net = read_edge_list(path);

    const GraphStats st = graph_stats(net);
    std::cout << "nodes " << net.node_count() << ", edges " << net.edge_count() << "\n";
    std::cout << "mean_distance " << st.mean_distance << "\n";
    std::cout << "diameter " << st.diameter << "\n";
    std::cout << "distance_stddev " << st.distance_stddev << "\n";
    std::cout << "clustering_coefficient " << st.clustering_coefficient << "\n";
    if (!csv_out.empty()) {
        std::ofstream out(csv_out);
        if (!out) throw ParseError("cannot open " + csv_out + " for writing");
        out << "path,nodes,edges,mean_distance,diameter,distance_stddev,clustering_coefficient\n";
        out << path << ',' << net.node_count() << ',' << net.edge_count() << ','
            << st.mean_distance << ',' << st.diameter << ',' << st.distance_stddev << ','
            << st.clustering_coefficient << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual network embedding toolkit: scenario generation, solvers, statistics"};
    app.require_subcommand(1);

    GenerateOpts gen;
    auto* generate = app.add_subcommand("generate", "Generate a scenario file");
    generate->add_option("kind", gen.kind, "waxman|er|pss|zoo")->required();
    generate->add_option("-o,--out", gen.out, "Output scenario JSON path");
    generate->add_option("--seed", gen.seed, "RNG seed");
    generate->add_option("--n", gen.n, "Substrate node count (waxman/er)");
    generate->add_option("--alpha", gen.alpha, "Waxman alpha");
    generate->add_option("--beta", gen.beta, "Waxman beta");
    generate->add_option("--p", gen.p, "Edge probability (er)");
    generate->add_option("--slices", gen.slices, "Number of slices (pss: default 100)");
    generate->add_option("--size-min", gen.size_min, "Minimum slice size");
    generate->add_option("--size-max", gen.size_max, "Maximum slice size");
    generate->add_option("--demand-min", gen.demand_min, "Minimum CPU/BW demand");
    generate->add_option("--demand-max", gen.demand_max, "Maximum CPU/BW demand");
    generate->add_option("--cpu-min", gen.cpu_min, "Minimum node CPU capacity");
    generate->add_option("--cpu-max", gen.cpu_max, "Maximum node CPU capacity");
    generate->add_option("--bw-min", gen.bw_min, "Minimum link bandwidth capacity");
    generate->add_option("--bw-max", gen.bw_max, "Maximum link bandwidth capacity");
    generate->add_option("--lambda", gen.lambda, "Arrival rate (per second)");
    generate->add_option("--mu", gen.mu, "Departure rate (per second)");
    generate->add_option("--i", gen.pss_index, "Scenario index (pss): sizes 7+i..10+i");
    generate->add_option("--reuse", gen.reuse, "Host reuse probability (pss)");
    generate->add_option("--file", gen.zoo_file, "GraphML topology file (zoo)");

    RunOpts run;
    auto* runcmd = app.add_subcommand("run", "Run algorithms over a scenario, write results CSV");
    runcmd->add_option("scenario", run.scenario_path, "Scenario JSON path")->required();
    runcmd->add_option("--algo", run.algo, "nepa|nepa-w|nrpa|nrpa-w|uct");
    runcmd->add_option("--n", run.n, "Iterations per level");
    runcmd->add_option("--level", run.level, "Search level");
    runcmd->add_option("--refine-level", run.refine_level, "Refinement level (nepa)");
    runcmd->add_option("--k", run.k, "Refinement candidate hosts (nepa)");
    runcmd->add_option("--x", run.x, "Refinement rounds, 0 = slice size (nepa)");
    runcmd->add_option("--reward", run.reward, "rc|afbd");
    runcmd->add_option("--budget", run.budget, "Link-placement budget per slice (uct)");
    runcmd->add_option("--c", run.c, "Exploration constant (uct)");
    runcmd->add_option("--seeds", run.seeds, "Number of seeds (rows)");
    runcmd->add_option("--seed-base", run.seed_base, "First seed value");
    runcmd->add_option("--jobs", run.jobs, "Parallel runs (env VNE_JOBS)");
    runcmd->add_option("-o,--out", run.out, "Results CSV path");
    runcmd->add_option("--per-slice", run.per_slice, "Optional per-slice CSV path");

    std::string stats_path, stats_csv;
    auto* stats = app.add_subcommand("stats", "Topology statistics for a graph or scenario file");
    stats->add_option("path", stats_path, "Scenario JSON, GraphML, or edge-list file")->required();
    stats->add_option("--csv", stats_csv, "Optional CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (runcmd->parsed()) return cmd_run(run);
        if (stats->parsed()) return cmd_stats(stats_path, stats_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
