#include "mia/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mia/errors.hpp"
#include "mia/prng.hpp"

namespace mia {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Shortest-possible representation that still round-trips a double exactly.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("experiment config: trials must be >= 1");
    if (n_nodes < 2) throw ConfigError("experiment config: n_nodes must be >= 2");
    if (!(side > 0.0)) throw ConfigError("experiment config: side must be > 0");
    if (!(alpha >= 0.0)) throw ConfigError("experiment config: alpha must be >= 0");
    if (!(noise_psd > 0.0)) throw ConfigError("experiment config: noise_psd must be > 0");
    if (!(bandwidth > 0.0)) throw ConfigError("experiment config: bandwidth must be > 0");
    if (!(power > 0.0)) throw ConfigError("experiment config: power must be > 0");
    if (!(d_min > 0.0)) throw ConfigError("experiment config: d_min must be > 0");
    if (!(bits > 0.0)) throw ConfigError("experiment config: bits must be > 0");
    if (parallelism < 1) throw ConfigError("experiment config: parallelism must be >= 1");
    if (!(rr_quantum > 0.0)) throw ConfigError("experiment config: rr_quantum must be > 0");
    for (std::size_t i = 0; i < policies.size(); ++i)
        for (std::size_t j = i + 1; j < policies.size(); ++j)
            if (policies[i] == policies[j])
                throw ConfigError(std::string("experiment config: duplicate policy \"") +
                                  to_string(policies[i]) + "\"");
    search.validate();
}

TrialRow run_trial(const ExperimentConfig& cfg, int trial) {
    TrialRow row;
    row.trial = trial;
    row.seed = mix_seed(cfg.seed, trial);
    row.n_nodes = cfg.n_nodes;
    row.sp_delay = row.coop_delay = row.sp_energy = row.coop_energy = row.sp_over_coop = kNaN;
    row.dist_latest_delay = row.dist_rr_delay = row.dist_bcast_delay = kNaN;

    ChannelParams params;
    params.alpha = cfg.alpha;
    params.noise_psd = cfg.noise_psd;
    params.bandwidth = cfg.bandwidth;
    params.d_min = cfg.d_min;
    const Network net = generate_random_network(cfg.n_nodes, cfg.side, row.seed, params,
                                                cfg.power);

    SearchConfig search = cfg.search;
    search.semantics = cfg.semantics;
    try {
        const ComparisonRecord rec =
            compare_routes(net, cfg.bits, search, cfg.policies, cfg.rr_quantum);
        row.sp_delay = rec.sp_delay;
        row.sp_energy = rec.sp_energy;
        row.coop_delay = rec.coop_delay;
        row.coop_energy = rec.coop_energy;
        row.sp_over_coop = rec.sp_over_coop;
        for (const DistComparison& dc : rec.dist) {
            switch (dc.policy) {
                case Policy::LatestDecoder: row.dist_latest_delay = dc.delay; break;
                case Policy::RoundRobin: row.dist_rr_delay = dc.delay; break;
                case Policy::BroadcastAll: row.dist_bcast_delay = dc.delay; break;
            }
        }
    } catch (const NoRouteError&) {
        row.flagged = true;
    } catch (const StalledError&) {
        row.flagged = true;
    }
    return row;
}

namespace {

Aggregate aggregate_of(const std::vector<double>& values) {
    Aggregate a;
    if (values.empty()) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(sq / static_cast<double>(values.size()));
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    a.median = (sorted.size() % 2 == 1) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return a;
}

}  // namespace

Aggregates aggregate_rows(const ExperimentConfig& cfg, const std::vector<TrialRow>& rows) {
    Aggregates agg;
    agg.policies = cfg.policies;
    for (const TrialRow& row : rows)
        if (row.flagged) ++agg.flagged;
    if (2 * agg.flagged > static_cast<int>(rows.size()))
        throw ExperimentError("experiment degenerate: " + std::to_string(agg.flagged) + " of " +
                              std::to_string(rows.size()) + " trials flagged (no route/stalled)");
    agg.rows = static_cast<int>(rows.size()) - agg.flagged;

    std::vector<double> ratio, sp, coop;
    std::vector<std::vector<double>> dist(cfg.policies.size()), over(cfg.policies.size());
    for (const TrialRow& row : rows) {
        if (row.flagged) continue;
        ratio.push_back(row.sp_over_coop);
        sp.push_back(row.sp_delay);
        coop.push_back(row.coop_delay);
        for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
            double d = kNaN;
            switch (cfg.policies[p]) {
                case Policy::LatestDecoder: d = row.dist_latest_delay; break;
                case Policy::RoundRobin: d = row.dist_rr_delay; break;
                case Policy::BroadcastAll: d = row.dist_bcast_delay; break;
            }
            dist[p].push_back(d);
            over[p].push_back(d / row.coop_delay);
        }
    }
    agg.sp_over_coop = aggregate_of(ratio);
    agg.sp_delay = aggregate_of(sp);
    agg.coop_delay = aggregate_of(coop);
    for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
        agg.dist_delay.push_back(aggregate_of(dist[p]));
        agg.dist_over_coop.push_back(aggregate_of(over[p]));
    }
    return agg;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    report.rows.resize(cfg.trials);

    const int workers = std::min(cfg.parallelism, cfg.trials);
    if (workers <= 1) {
        for (int t = 0; t < cfg.trials; ++t) report.rows[t] = run_trial(cfg, t);
    } else {
        // Workers pull the next unclaimed trial; each row lands in its own
        // slot, so scheduling order cannot affect the report.
        std::atomic<int> next{0};
        std::mutex error_mutex;
        std::exception_ptr error;
        auto work = [&] {
            for (;;) {
                const int t = next.fetch_add(1);
                if (t >= cfg.trials) return;
                try {
                    report.rows[t] = run_trial(cfg, t);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

    report.aggregates = aggregate_rows(cfg, report.rows);
    return report;
}

void emit_csv(const ExperimentReport& report, std::ostream& out) {
    out << "trial,seed,n_nodes,sp_delay_s,coop_delay_s,dist_latest_delay_s,dist_rr_delay_s,"
           "dist_bcast_delay_s,sp_energy_j,coop_energy_j,sp_over_coop,flagged\n";
    for (const TrialRow& row : report.rows) {
        out << row.trial << ',' << row.seed << ',' << row.n_nodes << ',' << fmt(row.sp_delay)
            << ',' << fmt(row.coop_delay) << ',' << fmt(row.dist_latest_delay) << ','
            << fmt(row.dist_rr_delay) << ',' << fmt(row.dist_bcast_delay) << ','
            << fmt(row.sp_energy) << ',' << fmt(row.coop_energy) << ','
            << fmt(row.sp_over_coop) << ',' << (row.flagged ? 1 : 0) << '\n';
    }
}

void emit_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExperimentError("cannot write CSV file: " + path);
    emit_csv(report, out);
    if (!out) throw ExperimentError("failed writing CSV file: " + path);
}

std::string summary_json(const ExperimentReport& report) {
    using nlohmann::ordered_json;
    const ExperimentConfig& cfg = report.config;

    ordered_json config;
    config["trials"] = cfg.trials;
    config["n_nodes"] = cfg.n_nodes;
    config["side"] = cfg.side;
    config["alpha"] = cfg.alpha;
    config["noise_psd"] = cfg.noise_psd;
    config["bandwidth"] = cfg.bandwidth;
    config["power"] = cfg.power;
    config["d_min"] = cfg.d_min;
    config["bits"] = cfg.bits;
    config["seed"] = cfg.seed;
    config["semantics"] = to_string(cfg.semantics);
    auto policy_names = ordered_json::array();
    for (Policy policy : cfg.policies) policy_names.push_back(to_string(policy));
    config["policies"] = std::move(policy_names);
    config["search"] = {{"max_exhaustive_nodes", cfg.search.max_exhaustive_nodes},
                        {"max_iterations", cfg.search.max_iterations},
                        {"tol", cfg.search.tol}};
    config["parallelism"] = cfg.parallelism;
    config["rr_quantum"] = cfg.rr_quantum;

    auto stats = [](const Aggregate& a) {
        return ordered_json{{"mean", a.mean}, {"median", a.median}, {"stddev", a.stddev}};
    };

    ordered_json doc;
    doc["config"] = std::move(config);
    doc["trials"] = static_cast<int>(report.rows.size());
    doc["unflagged"] = report.aggregates.rows;
    doc["flagged"] = report.aggregates.flagged;
    doc["sp_over_coop"] = stats(report.aggregates.sp_over_coop);
    doc["sp_delay_s"] = stats(report.aggregates.sp_delay);
    doc["coop_delay_s"] = stats(report.aggregates.coop_delay);
    ordered_json policies;
    for (std::size_t p = 0; p < report.aggregates.policies.size(); ++p) {
        policies[to_string(report.aggregates.policies[p])] = {
            {"delay_s", stats(report.aggregates.dist_delay[p])},
            {"over_coop", stats(report.aggregates.dist_over_coop[p])}};
    }
    doc["policies"] = std::move(policies);
    return doc.dump(2) + "\n";
}

void emit_summary(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExperimentError("cannot write summary file: " + path);
    out << summary_json(report);
    if (!out) throw ExperimentError("failed writing summary file: " + path);
}

namespace {

using nlohmann::json;

double config_number(const json& v, const std::string& key) {
    if (!v.is_number())
        throw ParseError("experiment config: \"" + key + "\" must be a number");
    return v.get<double>();
}

int config_int(const json& v, const std::string& key) {
    if (!v.is_number_integer())
        throw ParseError("experiment config: \"" + key + "\" must be an integer");
    return v.get<int>();
}

}  // namespace

ExperimentConfig experiment_config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("experiment config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("experiment config: top level must be an object");

    ExperimentConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "trials") cfg.trials = config_int(value, key);
        else if (key == "n_nodes") cfg.n_nodes = config_int(value, key);
        else if (key == "side") cfg.side = config_number(value, key);
        else if (key == "alpha") cfg.alpha = config_number(value, key);
        else if (key == "noise_psd") cfg.noise_psd = config_number(value, key);
        else if (key == "bandwidth") cfg.bandwidth = config_number(value, key);
        else if (key == "power") cfg.power = config_number(value, key);
        else if (key == "d_min") cfg.d_min = config_number(value, key);
        else if (key == "bits") cfg.bits = config_number(value, key);
        else if (key == "seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer())
                throw ParseError("experiment config: \"seed\" must be a non-negative integer");
            if (value.is_number_integer() && !value.is_number_unsigned() &&
                value.get<long long>() < 0)
                throw ParseError("experiment config: \"seed\" must be a non-negative integer");
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "semantics") {
            if (!value.is_string())
                throw ParseError("experiment config: \"semantics\" must be a string");
            try {
                cfg.semantics = parse_semantics(value.get<std::string>());
            } catch (const ConfigError& e) {
                throw ParseError(std::string("experiment config: ") + e.what());
            }
        } else if (key == "policies") {
            if (!value.is_array())
                throw ParseError("experiment config: \"policies\" must be an array of strings");
            cfg.policies.clear();
            for (const json& name : value) {
                if (!name.is_string())
                    throw ParseError("experiment config: \"policies\" must be an array of strings");
                try {
                    cfg.policies.push_back(parse_policy(name.get<std::string>()));
                } catch (const ConfigError& e) {
                    throw ParseError(std::string("experiment config: ") + e.what());
                }
            }
        } else if (key == "search") {
            if (!value.is_object())
                throw ParseError("experiment config: \"search\" must be an object");
            for (const auto& [skey, svalue] : value.items()) {
                if (skey == "max_exhaustive_nodes")
                    cfg.search.max_exhaustive_nodes = config_int(svalue, skey);
                else if (skey == "max_iterations")
                    cfg.search.max_iterations = config_int(svalue, skey);
                else if (skey == "tol")
                    cfg.search.tol = config_number(svalue, skey);
                else
                    throw ParseError("experiment config: unknown key \"search." + skey + "\"");
            }
        } else if (key == "parallelism") {
            cfg.parallelism = config_int(value, key);
        } else if (key == "rr_quantum") {
            cfg.rr_quantum = config_number(value, key);
        } else {
            throw ParseError("experiment config: unknown key \"" + key + "\"");
        }
    }

    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open experiment config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return experiment_config_from_json_text(buf.str());
}

}  // namespace mia
