#include "mia/ordersearch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace mia {

void SearchConfig::validate() const {
    if (max_exhaustive_nodes < 2 || max_exhaustive_nodes > 8)
        throw ConfigError("max_exhaustive_nodes must lie in 2..8");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (!(tol > 0.0) || tol > 1e-3) throw ConfigError("tol must lie in (0, 1e-3]");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared state for one search: precomputed rates/powers plus memoized order
// evaluations (the heuristics revisit many orders across rounds).
class Evaluator {
  public:
    Evaluator(const Network& net, double bits, const SearchConfig& cfg)
        : net_(net), rates_(rate_matrix(net)), bits_(bits), cfg_(cfg) {
        power_.resize(net.size());
        for (std::size_t i = 0; i < net.size(); ++i) power_[i] = net.nodes[i].power;
    }

    // Minimum delay of an order, +inf when the order is infeasible.
    double delay_of(const std::vector<int>& order_ids) {
        auto it = delay_cache_.find(order_ids);
        if (it != delay_cache_.end()) return it->second;
        double d;
        try {
            TransmissionOrder order{order_ids};
            const LpProblem p = build_delay_lp(order, rates_, bits_, cfg_.semantics);
            const LpSolution sol = solve(p, cfg_.tol);
            if (sol.status != LpStatus::Optimal)
                throw InternalError("delay LP not optimal in search");
            d = sol.objective;
        } catch (const InfeasibleOrderError&) {
            d = kInf;
        }
        delay_cache_.emplace(order_ids, d);
        return d;
    }

    // Tie-broken reported energy of a delay-optimal allocation.
    double energy_of_order(const std::vector<int>& order_ids) {
        auto it = energy_cache_.find(order_ids);
        if (it != energy_cache_.end()) return it->second;
        TransmissionOrder order{order_ids};
        const Allocation alloc =
            delay_optimal_allocation(order, rates_, power_, bits_, cfg_.semantics, cfg_.tol);
        energy_cache_.emplace(order_ids, alloc.energy);
        return alloc.energy;
    }

    RouteSolution finish(const std::vector<int>& order_ids, const char* method) {
        TransmissionOrder order{order_ids};
        order.validate(net_);
        RouteSolution rs;
        rs.order = order;
        rs.allocation =
            delay_optimal_allocation(order, rates_, power_, bits_, cfg_.semantics, cfg_.tol);
        rs.method = method;
        return rs;
    }

    double tol() const { return cfg_.tol; }

  private:
    const Network& net_;
    RateMatrix rates_;
    std::vector<double> power_;
    double bits_;
    SearchConfig cfg_;
    std::map<std::vector<int>, double> delay_cache_;
    std::map<std::vector<int>, double> energy_cache_;
};

// Running winner with (delay, energy, lexicographic) tie-breaking. Energy is
// only computed when a delay tie actually occurs.
class BestOrder {
  public:
    explicit BestOrder(Evaluator& eval) : eval_(eval) {}

    void offer(const std::vector<int>& order_ids) {
        const double d = eval_.delay_of(order_ids);
        if (std::isinf(d)) return;
        if (order_.empty() || d < delay_ - band(d, delay_)) {
            take(order_ids, d);
            return;
        }
        if (d > delay_ + band(d, delay_)) return;
        // Delay tie: prefer lower energy, then the lexicographically smaller
        // order.
        const double ce = eval_.energy_of_order(order_ids);
        const double be = energy();
        const double eband = band(ce, be);
        if (ce < be - eband || (std::fabs(ce - be) <= eband && order_ids < order_)) take(order_ids, d);
    }

    bool found() const { return !order_.empty(); }
    const std::vector<int>& order() const { return order_; }
    double delay() const { return delay_; }

  private:
    double band(double a, double b) const { return eval_.tol() * (1.0 + std::max(a, b)); }

    double energy() {
        if (std::isnan(energy_)) energy_ = eval_.energy_of_order(order_);
        return energy_;
    }

    void take(const std::vector<int>& order_ids, double d) {
        order_ = order_ids;
        delay_ = d;
        energy_ = std::numeric_limits<double>::quiet_NaN();
    }

    Evaluator& eval_;
    std::vector<int> order_;
    double delay_ = kInf;
    double energy_ = std::numeric_limits<double>::quiet_NaN();
};

void enumerate_orders(std::vector<int>& relays, std::vector<bool>& used,
                      const std::vector<int>& candidates, int source, int destination,
                      BestOrder& best) {
    std::vector<int> order_ids;
    order_ids.reserve(relays.size() + 2);
    order_ids.push_back(source);
    order_ids.insert(order_ids.end(), relays.begin(), relays.end());
    order_ids.push_back(destination);
    best.offer(order_ids);

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        relays.push_back(candidates[i]);
        enumerate_orders(relays, used, candidates, source, destination, best);
        relays.pop_back();
        used[i] = false;
    }
}

}  // namespace

RouteSolution exhaustive_best_order(const Network& net, double bits, const SearchConfig& cfg) {
    cfg.validate();
    net.validate();
    if (net.size() > static_cast<std::size_t>(cfg.max_exhaustive_nodes))
        throw ConfigError("network has " + std::to_string(net.size()) +
                          " nodes; exhaustive search is guarded at " +
                          std::to_string(cfg.max_exhaustive_nodes));

    Evaluator eval(net, bits, cfg);
    BestOrder best(eval);
    std::vector<int> candidates;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const int id = static_cast<int>(i);
        if (id != net.source && id != net.destination) candidates.push_back(id);
    }
    std::vector<int> relays;
    std::vector<bool> used(candidates.size(), false);
    enumerate_orders(relays, used, candidates, net.source, net.destination, best);

    if (!best.found())
        throw NoRouteError("no feasible transmission order reaches the destination");
    return eval.finish(best.order(), "exhaustive");
}

RouteSolution greedy_insertion_search(const Network& net, double bits, const SearchConfig& cfg) {
    cfg.validate();
    net.validate();
    Evaluator eval(net, bits, cfg);

    std::vector<int> current = {net.source, net.destination};
    double cur_delay = eval.delay_of(current);

    for (int round = 0; round < cfg.max_iterations; ++round) {
        std::vector<int> best_cand;
        double best_delay = kInf;
        for (std::size_t u = 0; u < net.size(); ++u) {
            const int id = static_cast<int>(u);
            if (std::find(current.begin(), current.end(), id) != current.end()) continue;
            for (std::size_t pos = 1; pos < current.size(); ++pos) {
                std::vector<int> cand = current;
                cand.insert(cand.begin() + pos, id);
                const double d = eval.delay_of(cand);
                if (d < best_delay) {
                    best_delay = d;
                    best_cand = std::move(cand);
                }
            }
        }
        const bool improves = std::isinf(cur_delay)
                                  ? !std::isinf(best_delay)
                                  : best_delay < cur_delay - cfg.tol * (1.0 + cur_delay);
        if (!improves) break;
        current = std::move(best_cand);
        cur_delay = best_delay;
    }

    if (std::isinf(cur_delay))
        throw NoRouteError("no feasible transmission order reaches the destination");
    return eval.finish(current, "greedy");
}

RouteSolution local_search_swaps(const Network& net, double bits, const RouteSolution& init,
                                 const SearchConfig& cfg) {
    cfg.validate();
    net.validate();
    init.order.validate(net);
    Evaluator eval(net, bits, cfg);

    std::vector<int> current = init.order.nodes;
    double cur_delay = eval.delay_of(current);
    if (std::isinf(cur_delay)) throw InfeasibleOrderError("local search requires a feasible init");

    for (int round = 0; round < cfg.max_iterations; ++round) {
        std::vector<int> best_cand;
        double best_delay = kInf;
        auto consider = [&](std::vector<int>&& cand) {
            const double d = eval.delay_of(cand);
            if (d < best_delay) {
                best_delay = d;
                best_cand = std::move(cand);
            }
        };

        const std::size_t len = current.size();
        // Remove one relay.
        for (std::size_t i = 1; i + 1 < len; ++i) {
            std::vector<int> cand = current;
            cand.erase(cand.begin() + i);
            consider(std::move(cand));
        }
        // Swap two relays.
        for (std::size_t i = 1; i + 1 < len; ++i)
            for (std::size_t j = i + 1; j + 1 < len; ++j) {
                std::vector<int> cand = current;
                std::swap(cand[i], cand[j]);
                consider(std::move(cand));
            }
        // Move one relay to another interior position.
        for (std::size_t i = 1; i + 1 < len; ++i)
            for (std::size_t j = 1; j + 1 < len; ++j) {
                if (i == j) continue;
                std::vector<int> cand = current;
                const int id = cand[i];
                cand.erase(cand.begin() + i);
                cand.insert(cand.begin() + j, id);
                consider(std::move(cand));
            }
        // Insert one unused node.
        for (std::size_t u = 0; u < net.size(); ++u) {
            const int id = static_cast<int>(u);
            if (std::find(current.begin(), current.end(), id) != current.end()) continue;
            for (std::size_t pos = 1; pos < len; ++pos) {
                std::vector<int> cand = current;
                cand.insert(cand.begin() + pos, id);
                consider(std::move(cand));
            }
        }

        if (!(best_delay < cur_delay - cfg.tol * (1.0 + cur_delay))) break;
        current = std::move(best_cand);
        cur_delay = best_delay;
    }

    return eval.finish(current, "local-search");
}

}  // namespace mia
