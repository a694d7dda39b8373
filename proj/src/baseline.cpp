#include "mia/baseline.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <utility>

#include "mia/allocation.hpp"
#include "mia/errors.hpp"

namespace mia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Path shortest_path(const Network& net, double bits) {
    net.validate();
    if (!(bits > 0.0)) {
        throw DomainError("shortest path: bits must be positive");
    }
    const RateMatrix rates = rate_matrix(net);
    const int n = static_cast<int>(net.nodes.size());

    std::vector<double> dist(n, kInf);
    std::vector<int> prev(n, -1);
    std::vector<char> done(n, 0);
    dist[net.source] = 0.0;

    // (distance, node) min-heap; stale entries are skipped via `done`.
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.emplace(0.0, net.source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (int v = 0; v < n; ++v) {
            if (v == u || rates(u, v) <= 0.0) continue;
            const double cand = d + bits / rates(u, v);
            // Strict improvement, or an equal-cost route through a smaller
            // predecessor id: keeps the reported path deterministic.
            if (cand < dist[v] || (cand == dist[v] && prev[v] >= 0 && u < prev[v])) {
                dist[v] = cand;
                prev[v] = u;
                heap.emplace(cand, v);
            }
        }
    }

    if (!done[net.destination] || !(dist[net.destination] < kInf)) {
        throw NoRouteError("shortest path: destination " + std::to_string(net.destination) +
                           " is unreachable from source " + std::to_string(net.source));
    }

    Path path;
    for (int v = net.destination; v != -1; v = prev[v]) {
        path.nodes.push_back(v);
    }
    std::reverse(path.nodes.begin(), path.nodes.end());
    for (std::size_t h = 0; h + 1 < path.nodes.size(); ++h) {
        const int u = path.nodes[h];
        const int v = path.nodes[h + 1];
        const double hop = bits / rates(u, v);
        path.per_hop_delay.push_back(hop);
        path.total_delay += hop;
        path.total_energy += net.nodes[u].power * hop;
    }
    return path;
}

RouteSolution centralized_search(const Network& net, double bits, const SearchConfig& cfg) {
    cfg.validate();
    net.validate();
    const int n = static_cast<int>(net.nodes.size());
    if (n <= cfg.max_exhaustive_nodes) {
        return exhaustive_best_order(net, bits, cfg);
    }

    RouteSolution best = local_search_swaps(net, bits, greedy_insertion_search(net, bits, cfg), cfg);

    // Second start from the shortest-path node sequence. Local search only
    // ever improves, so the final route is at least as fast as store-and-
    // forward along that path whenever one exists.
    try {
        const Path sp = shortest_path(net, bits);
        RouteSolution start;
        start.order.nodes = sp.nodes;
        start.allocation =
            delay_optimal_allocation(start.order, net, bits, cfg.semantics, cfg.tol);
        RouteSolution alt = local_search_swaps(net, bits, start, cfg);
        const double band = cfg.tol * (1.0 + std::max(std::abs(alt.allocation.delay),
                                                      std::abs(best.allocation.delay)));
        if (alt.allocation.delay < best.allocation.delay - band ||
            (std::abs(alt.allocation.delay - best.allocation.delay) <= band &&
             alt.allocation.energy < best.allocation.energy)) {
            best = std::move(alt);
        }
    } catch (const NoRouteError&) {
        // No store-and-forward route; the greedy start stands alone.
    }
    return best;
}

ComparisonRecord compare_routes(const Network& net, double bits, const SearchConfig& cfg,
                                const std::vector<Policy>& policies, double rr_quantum) {
    ComparisonRecord rec;

    const Path sp = shortest_path(net, bits);
    rec.sp_delay = sp.total_delay;
    rec.sp_energy = sp.total_energy;
    rec.sp_path = sp.nodes;

    const RouteSolution coop = centralized_search(net, bits, cfg);
    rec.coop_delay = coop.allocation.delay;
    rec.coop_energy = coop.allocation.energy;
    rec.coop_order = coop.order.nodes;
    rec.coop_method = coop.method;
    rec.sp_over_coop = rec.sp_delay / rec.coop_delay;

    // References for the distributed ratios: each policy is judged against the
    // centralized optimum under its own semantics. Reuse the main search when
    // the semantics match, run the complementary one lazily otherwise.
    rec.coop_orthogonal_delay = kInf;
    rec.coop_broadcast_delay = kInf;
    if (cfg.semantics == Semantics::Orthogonal) {
        rec.coop_orthogonal_delay = rec.coop_delay;
    } else {
        rec.coop_broadcast_delay = rec.coop_delay;
    }
    auto coop_delay_for = [&](Semantics sem) -> double {
        double& slot = (sem == Semantics::Orthogonal) ? rec.coop_orthogonal_delay
                                                      : rec.coop_broadcast_delay;
        if (slot == kInf) {
            SearchConfig alt = cfg;
            alt.semantics = sem;
            slot = centralized_search(net, bits, alt).allocation.delay;
        }
        return slot;
    };

    for (const Policy policy : policies) {
        const DistributedOutcome out = simulate_distributed(net, bits, policy, rr_quantum);
        DistComparison dc;
        dc.policy = policy;
        dc.delay = out.delay;
        dc.energy = out.energy;
        const Semantics sem =
            (policy == Policy::BroadcastAll) ? Semantics::BroadcastAll : Semantics::Orthogonal;
        dc.over_coop = dc.delay / coop_delay_for(sem);
        rec.dist.push_back(dc);
    }
    return rec;
}

}  // namespace mia
