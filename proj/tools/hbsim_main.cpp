// hbsim — command-line front end for the home-box overlay cache simulator.
//
//   hbsim gen-topology --routers 47000 --edges-per-node 3 --seed 1 --out topo.txt
//   hbsim run --config run.json --out results/
//   hbsim sweep --config sweep.json --workers 8 --out results/
//   hbsim report --in results/results.csv --out results/

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hbsim/config.hpp"
#include "hbsim/engine.hpp"
#include "hbsim/rng.hpp"
#include "hbsim/sweep.hpp"
#include "hbsim/topology.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing: " + path.string());
    }
}

std::string metrics_json(const hbsim::RunMetrics& m) {
    nlohmann::ordered_json j;
    j["n_requests"] = m.n_requests;
    j["n_local"] = m.n_local;
    j["n_peering"] = m.n_peering;
    j["n_miss"] = m.n_miss;
    j["sum_peering_hops"] = m.sum_peering_hops;
    j["h_miss"] = m.h_miss;
    j["r_local"] = m.r_local;
    j["r_peering"] = m.r_peering;
    j["r_miss"] = m.r_miss;
    j["h_peering"] = m.h_peering;
    j["avg_cost"] = m.avg_cost;
    return j.dump(2) + "\n";
}

std::string outcomes_csv(const std::vector<hbsim::OutcomeRecord>& trace) {
    std::string out = "seq,requester,video,kind,server,hops\n";
    for (const hbsim::OutcomeRecord& rec : trace) {
        out += std::to_string(rec.sequence);
        out += ',';
        out += std::to_string(rec.requester);
        out += ',';
        out += std::to_string(rec.video);
        out += ',';
        switch (rec.kind) {
            case hbsim::ServeKind::kLocal:
                out += "local";
                break;
            case hbsim::ServeKind::kPeering:
                out += "peering";
                break;
            case hbsim::ServeKind::kMiss:
                out += "miss";
                break;
        }
        out += ',';
        if (rec.server.has_value()) {
            out += std::to_string(*rec.server);
        }
        out += ',';
        out += hbsim::format_double(rec.hops);
        out += '\n';
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Home-box overlay collaborative caching simulator"};
    app.require_subcommand(1);

    // gen-topology
    auto* gen = app.add_subcommand("gen-topology", "Generate a power-law router graph edge list");
    std::uint32_t gen_routers = 47000;
    std::uint32_t gen_edges = 3;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--routers", gen_routers, "Number of routers");
    gen->add_option("--edges-per-node", gen_edges, "Edges attached per new node");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--out", gen_out, "Output edge-list file")->required();

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute a single simulation run");
    std::string run_config;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::uint32_t> run_degree;
    std::optional<std::uint32_t> run_cache;
    std::optional<std::uint64_t> run_requests;
    std::string run_out;
    run_cmd->add_option("--config", run_config, "Run config JSON (defaults used when omitted)");
    run_cmd->add_option("--seed", run_seed, "Override root seed");
    run_cmd->add_option("--degree", run_degree, "Override node degree d");
    run_cmd->add_option("--cache-size", run_cache, "Override cache size s");
    run_cmd->add_option("--requests", run_requests, "Override request count N");
    run_cmd->add_option("--out", run_out, "Directory for metrics.json (+ outcomes.csv when logged)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    std::string sweep_config;
    std::optional<std::uint64_t> sweep_seed;
    unsigned sweep_workers = std::max(1u, std::thread::hardware_concurrency());
    std::string sweep_out = ".";
    sweep_cmd->add_option("--config", sweep_config, "Sweep spec JSON")->required();
    sweep_cmd->add_option("--seed", sweep_seed, "Override root seed");
    sweep_cmd->add_option("--workers", sweep_workers, "Parallel row workers");
    sweep_cmd->add_option("--out", sweep_out, "Directory for results.csv");

    // report
    auto* report_cmd = app.add_subcommand("report", "Summarize a results CSV into figure data");
    std::string report_in;
    std::string report_out = ".";
    report_cmd->add_option("--in", report_in, "results.csv from a sweep")->required();
    report_cmd->add_option("--out", report_out, "Directory for series CSVs and summary.txt");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const hbsim::Topology topo =
                hbsim::Topology::generate_power_law(gen_routers, gen_edges, gen_seed);
            std::ofstream out(gen_out, std::ios::binary);
            if (!out) {
                throw std::runtime_error("cannot open output file: " + gen_out);
            }
            out << "# power-law topology: routers=" << topo.node_count()
                << " links=" << topo.edge_count() << " m=" << gen_edges << " seed=" << gen_seed
                << "\n";
            topo.write_edge_list(out);
            std::cout << "wrote " << gen_out << " (" << topo.node_count() << " nodes, "
                      << topo.edge_count() << " edges)\n";
        } else if (run_cmd->parsed()) {
            hbsim::SimConfig config = run_config.empty() ? hbsim::SimConfig{}
                                                         : hbsim::load_config_file(run_config);
            if (run_seed) config.seed = *run_seed;
            if (run_degree) config.degree = *run_degree;
            if (run_cache) config.cache_size = *run_cache;
            if (run_requests) config.n_requests = *run_requests;
            config.validate();

            const hbsim::RunResult result = hbsim::run(config);
            const std::string json = metrics_json(result.metrics);
            std::cout << json;
            if (!run_out.empty()) {
                std::filesystem::create_directories(run_out);
                write_file(std::filesystem::path(run_out) / "metrics.json", json);
                if (config.log_outcomes) {
                    write_file(std::filesystem::path(run_out) / "outcomes.csv",
                               outcomes_csv(result.trace));
                }
            }
        } else if (sweep_cmd->parsed()) {
            hbsim::SweepSpec spec = hbsim::load_sweep_file(sweep_config);
            if (sweep_seed) spec.base.seed = *sweep_seed;
            const hbsim::SweepTable table = hbsim::run_sweep(spec, sweep_workers);
            std::filesystem::create_directories(sweep_out);
            const std::filesystem::path path = std::filesystem::path(sweep_out) / "results.csv";
            write_file(path, hbsim::results_csv(table));
            std::cout << "wrote " << path.string() << " (" << table.rows.size() << " rows)\n";
        } else if (report_cmd->parsed()) {
            std::ifstream in(report_in, std::ios::binary);
            if (!in) {
                throw std::runtime_error("cannot open results file: " + report_in);
            }
            std::ostringstream buffer;
            buffer << in.rdbuf();
            const hbsim::SweepTable table = hbsim::parse_results_csv(buffer.str());
            const hbsim::ReportOutput output = hbsim::report(table);
            std::filesystem::create_directories(report_out);
            write_file(std::filesystem::path(report_out) / "hit_ratios.csv",
                       output.hit_ratios_csv);
            write_file(std::filesystem::path(report_out) / "network_awareness.csv",
                       output.network_csv);
            write_file(std::filesystem::path(report_out) / "overall_cost.csv", output.cost_csv);
            write_file(std::filesystem::path(report_out) / "summary.txt", output.summary);
            std::cout << output.summary;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
