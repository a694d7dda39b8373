// miaroute: command-line front end for the routing library.
//
//   miaroute gen          write a random network file
//   miaroute solve        cooperative order + time allocation for one network
//   miaroute baseline     conventional shortest-path route
//   miaroute distributed  run one local-information policy and report the result
//   miaroute experiment   Monte-Carlo comparison driven by a JSON config
//
// Exit codes: 0 success, 1 usage error, 2 bad input data, 3 experiment or
// simulation failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mia/baseline.hpp"
#include "mia/distsim.hpp"
#include "mia/errors.hpp"
#include "mia/harness.hpp"
#include "mia/netmodel.hpp"
#include "mia/ordersearch.hpp"

namespace {

using nlohmann::ordered_json;

ordered_json allocation_json(const mia::RouteSolution& sol) {
    ordered_json doc;
    doc["order"] = sol.order.nodes;
    doc["method"] = sol.method;
    doc["semantics"] = mia::to_string(sol.allocation.semantics);
    doc["delay_s"] = sol.allocation.delay;
    doc["energy_j"] = sol.allocation.energy;
    doc["phases"] = sol.allocation.phases;
    return doc;
}

int run_gen(const std::string& out_path, int nodes, double side, std::uint64_t seed,
            double power, const mia::ChannelParams& params) {
    const mia::Network net = mia::generate_random_network(nodes, side, seed, params, power);
    mia::save_network(net, out_path);
    std::cout << "wrote " << out_path << " (" << nodes << " nodes, source " << net.source
              << ", destination " << net.destination << ")\n";
    return 0;
}

int run_solve(const std::string& net_path, double bits, const std::string& semantics_name,
              const std::string& method) {
    const mia::Network net = mia::load_network(net_path);
    mia::SearchConfig cfg;
    cfg.semantics = mia::parse_semantics(semantics_name);

    mia::RouteSolution sol;
    if (method == "auto") {
        sol = mia::centralized_search(net, bits, cfg);
    } else if (method == "exhaustive") {
        sol = mia::exhaustive_best_order(net, bits, cfg);
    } else if (method == "greedy") {
        sol = mia::greedy_insertion_search(net, bits, cfg);
    } else if (method == "local_search") {
        sol = mia::local_search_swaps(net, bits, mia::greedy_insertion_search(net, bits, cfg),
                                      cfg);
    } else {
        throw mia::ConfigError("unknown method \"" + method +
                               "\" (expected auto, exhaustive, greedy or local_search)");
    }
    std::cout << allocation_json(sol).dump(2) << "\n";
    return 0;
}

int run_baseline(const std::string& net_path, double bits) {
    const mia::Network net = mia::load_network(net_path);
    const mia::Path path = mia::shortest_path(net, bits);
    ordered_json doc;
    doc["path"] = path.nodes;
    doc["delay_s"] = path.total_delay;
    doc["energy_j"] = path.total_energy;
    doc["per_hop_delay_s"] = path.per_hop_delay;
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int run_distributed(const std::string& net_path, double bits, const std::string& policy_name,
                    double rr_quantum, const std::string& trace_path) {
    const mia::Network net = mia::load_network(net_path);
    const mia::Policy policy = mia::parse_policy(policy_name);
    const mia::DistributedOutcome outcome =
        mia::simulate_distributed(net, bits, policy, rr_quantum);
    if (!trace_path.empty()) mia::write_trace_csv(outcome, trace_path);

    ordered_json doc;
    doc["policy"] = mia::to_string(outcome.policy);
    doc["delay_s"] = outcome.delay;
    doc["energy_j"] = outcome.energy;
    doc["decode_order"] = mia::decode_order_of(outcome).nodes;
    auto decodes = ordered_json::array();
    for (const auto& [node, time] : outcome.decodes)
        decodes.push_back({{"node", node}, {"time_s", time}});
    doc["decodes"] = std::move(decodes);
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int run_experiment(const std::string& config_path, const std::string& out_dir) {
    const mia::ExperimentConfig cfg = mia::load_experiment_config(config_path);
    const mia::ExperimentReport report = mia::run_experiment(cfg);

    std::filesystem::create_directories(out_dir);
    const std::string csv_path = (std::filesystem::path(out_dir) / "results.csv").string();
    const std::string summary_path = (std::filesystem::path(out_dir) / "summary.json").string();
    mia::emit_csv(report, csv_path);
    mia::emit_summary(report, summary_path);
    std::cout << mia::summary_json(report);
    std::cerr << "wrote " << csv_path << " and " << summary_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative-relay routing with mutual-information accumulation"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random network file");
    std::string gen_out;
    int gen_nodes = 30;
    double gen_side = 100.0;
    std::uint64_t gen_seed = 1;
    double gen_power = 0.1;
    mia::ChannelParams gen_params;
    gen->add_option("-o,--out", gen_out, "Output network JSON path")->required();
    gen->add_option("-n,--nodes", gen_nodes, "Node count (>= 2)");
    gen->add_option("--side", gen_side, "Square side length in meters");
    gen->add_option("--seed", gen_seed, "Placement seed");
    gen->add_option("--power", gen_power, "Per-node transmit power in watts");
    gen->add_option("--alpha", gen_params.alpha, "Path-loss exponent");
    gen->add_option("--noise-psd", gen_params.noise_psd, "Noise PSD N0 in W/Hz");
    gen->add_option("--bandwidth", gen_params.bandwidth, "Bandwidth W in Hz");
    gen->add_option("--d-min", gen_params.d_min, "Distance clamp in meters");

    // solve
    auto* solve = app.add_subcommand("solve", "Cooperative order and time allocation");
    std::string solve_net;
    double solve_bits = 1e6;
    std::string solve_semantics = "orthogonal";
    std::string solve_method = "auto";
    solve->add_option("--net", solve_net, "Network JSON path")->required();
    solve->add_option("--bits", solve_bits, "Message size B in bits");
    solve->add_option("--semantics", solve_semantics, "orthogonal | broadcast_all");
    solve->add_option("--method", solve_method, "auto | exhaustive | greedy | local_search");

    // baseline
    auto* baseline = app.add_subcommand("baseline", "Shortest-path store-and-forward route");
    std::string base_net;
    double base_bits = 1e6;
    baseline->add_option("--net", base_net, "Network JSON path")->required();
    baseline->add_option("--bits", base_bits, "Message size B in bits");

    // distributed
    auto* dist = app.add_subcommand("distributed", "Simulate a local-information policy");
    std::string dist_net;
    double dist_bits = 1e6;
    std::string dist_policy = "latest_decoder";
    double dist_quantum = 1e-3;
    std::string dist_trace;
    dist->add_option("--net", dist_net, "Network JSON path")->required();
    dist->add_option("--bits", dist_bits, "Message size B in bits");
    dist->add_option("--policy", dist_policy, "latest_decoder | round_robin | broadcast_all");
    dist->add_option("--rr-quantum", dist_quantum, "Round-robin turn length in seconds");
    dist->add_option("--trace", dist_trace, "Also write an event trace CSV here");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Monte-Carlo comparison run");
    std::string exp_config;
    std::string exp_out;
    experiment->add_option("--config", exp_config, "Experiment config JSON path")->required();
    experiment->add_option("--out", exp_out, "Output directory for results.csv / summary.json")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // --help exits cleanly, everything else is usage
    }

    try {
        if (gen->parsed())
            return run_gen(gen_out, gen_nodes, gen_side, gen_seed, gen_power, gen_params);
        if (solve->parsed()) return run_solve(solve_net, solve_bits, solve_semantics, solve_method);
        if (baseline->parsed()) return run_baseline(base_net, base_bits);
        if (dist->parsed())
            return run_distributed(dist_net, dist_bits, dist_policy, dist_quantum, dist_trace);
        if (experiment->parsed()) return run_experiment(exp_config, exp_out);
        std::cerr << "error: no subcommand selected\n";
        return 1;
    } catch (const mia::ExperimentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mia::StalledError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mia::InternalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mia::Error& e) {
        // Remaining library errors describe unusable input data (parse,
        // config, domain, no-route, infeasible-order).
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
