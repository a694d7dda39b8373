#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mia/baseline.hpp"
#include "mia/netmodel.hpp"
#include "mia/ordersearch.hpp"

namespace mia {

// Everything a Monte-Carlo run depends on. Defaults describe the desk-scale
// scenario: 30 nodes in a 100 m square, alpha-3 path loss, 1 MHz links at
// 0.1 W, one megabit to deliver.
struct ExperimentConfig {
    int trials = 100;
    int n_nodes = 30;
    double side = 100.0;

    double alpha = 3.0;
    double noise_psd = 1e-12;
    double bandwidth = 1e6;
    double power = 0.1;  // equal PSD: every node transmits at this power
    double d_min = 0.01;

    double bits = 1e6;
    std::uint64_t seed = 1;

    Semantics semantics = Semantics::Orthogonal;
    std::vector<Policy> policies = {Policy::LatestDecoder, Policy::RoundRobin,
                                    Policy::BroadcastAll};
    SearchConfig search;
    int parallelism = 1;
    double rr_quantum = 1e-3;

    void validate() const;  // throws ConfigError
};

// One trial's results. Delay/energy fields are NaN when the corresponding
// quantity was not computed (policy not requested, or the trial is flagged).
struct TrialRow {
    int trial = 0;
    std::uint64_t seed = 0;
    int n_nodes = 0;
    double sp_delay = 0.0;
    double coop_delay = 0.0;
    double dist_latest_delay = 0.0;
    double dist_rr_delay = 0.0;
    double dist_bcast_delay = 0.0;
    double sp_energy = 0.0;
    double coop_energy = 0.0;
    double sp_over_coop = 0.0;
    bool flagged = false;  // NoRoute or Stalled; excluded from aggregates
};

// Mean / median / population standard deviation over the unflagged rows.
struct Aggregate {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
};

struct Aggregates {
    int rows = 0;     // unflagged row count the statistics cover
    int flagged = 0;  // rows excluded
    Aggregate sp_over_coop;
    Aggregate sp_delay;
    Aggregate coop_delay;
    // Per requested policy, same order as cfg.policies.
    std::vector<Policy> policies;
    std::vector<Aggregate> dist_delay;
    std::vector<Aggregate> dist_over_coop;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<TrialRow> rows;
    Aggregates aggregates;
};

// Runs one trial in isolation: generate the network from the mixed seed, then
// baseline + centralized search + each requested policy. NoRouteError and
// StalledError turn into a flagged row.
TrialRow run_trial(const ExperimentConfig& cfg, int trial);

// Aggregation fold over rows in trial order (flagged rows skipped). Throws
// ExperimentError when more than half the rows are flagged.
Aggregates aggregate_rows(const ExperimentConfig& cfg, const std::vector<TrialRow>& rows);

// Full Monte-Carlo run. Trials execute on up to cfg.parallelism threads, each
// worker pulling the next trial index; rows land in a preallocated slot per
// trial, so the report is byte-identical at any parallelism degree.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// CSV with a fixed column schema:
//   trial,seed,n_nodes,sp_delay_s,coop_delay_s,dist_latest_delay_s,
//   dist_rr_delay_s,dist_bcast_delay_s,sp_energy_j,coop_energy_j,
//   sp_over_coop,flagged
void emit_csv(const ExperimentReport& report, std::ostream& out);
void emit_csv(const ExperimentReport& report, const std::string& path);

// Aggregates plus a config echo as pretty-printed JSON.
std::string summary_json(const ExperimentReport& report);
void emit_summary(const ExperimentReport& report, const std::string& path);

// Config file is JSON mirroring ExperimentConfig; absent keys keep defaults,
// unknown keys are rejected so typos cannot silently change the physics.
ExperimentConfig experiment_config_from_json_text(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace mia
