#pragma once

#include <vector>

#include "mia/distsim.hpp"
#include "mia/netmodel.hpp"
#include "mia/ordersearch.hpp"

namespace mia {

// Conventional store-and-forward route: every hop carries the full message,
// nothing is accumulated from off-path transmissions.
struct Path {
    std::vector<int> nodes;              // source .. destination
    std::vector<double> per_hop_delay;   // B / C(i->j) per hop, seconds
    double total_delay = 0.0;
    double total_energy = 0.0;           // sum of P_i * B / C(i->j)
};

// Dijkstra over link weights B/C(i->j); zero-rate links are absent. Equal-cost
// ties resolve to the smaller predecessor id. Throws NoRouteError when the
// destination is unreachable.
Path shortest_path(const Network& net, double bits);

// Centralized cooperative optimum: the exhaustive oracle on small networks,
// otherwise greedy insertion polished by local search, with a second local
// search started from the shortest-path node sequence when a route exists
// (that start guarantees the cooperative result never loses to the baseline).
RouteSolution centralized_search(const Network& net, double bits, const SearchConfig& cfg);

struct DistComparison {
    Policy policy = Policy::LatestDecoder;
    double delay = 0.0;
    double energy = 0.0;
    // Ratio against the cooperative optimum computed under this policy's own
    // channel semantics (Orthogonal for the single-transmitter policies,
    // BroadcastAll for the broadcast policy).
    double over_coop = 0.0;
};

struct ComparisonRecord {
    double sp_delay = 0.0;
    double sp_energy = 0.0;
    std::vector<int> sp_path;

    double coop_delay = 0.0;  // centralized optimum under cfg.semantics
    double coop_energy = 0.0;
    std::vector<int> coop_order;
    std::string coop_method;

    // Matching-semantics references for the distributed ratios. One of them
    // aliases coop_delay depending on cfg.semantics.
    double coop_orthogonal_delay = 0.0;
    double coop_broadcast_delay = 0.0;

    std::vector<DistComparison> dist;
    double sp_over_coop = 0.0;
};

// Runs the baseline, the centralized search and the distributed policies on
// one network and reports delays, energies and ratios. Propagates NoRouteError
// and StalledError.
ComparisonRecord compare_routes(const Network& net, double bits, const SearchConfig& cfg,
                                const std::vector<Policy>& policies = {Policy::LatestDecoder,
                                                                       Policy::RoundRobin,
                                                                       Policy::BroadcastAll},
                                double rr_quantum = 1e-3);

}  // namespace mia
