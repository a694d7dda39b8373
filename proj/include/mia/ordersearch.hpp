#pragma once

#include "mia/allocation.hpp"

namespace mia {

struct SearchConfig {
    // Exhaustive enumeration guard: orderings grow factorially, so the oracle
    // refuses networks larger than this. Hard cap 8.
    int max_exhaustive_nodes = 7;
    int max_iterations = 1000;  // improvement rounds for the heuristics
    double tol = 1e-9;          // LP tolerance, also the improvement threshold scale
    Semantics semantics = Semantics::Orthogonal;

    void validate() const;
};

// Enumerates every ordered relay subset from source to destination, solves
// each delay LP and returns the global minimum. Ties are broken by lower
// energy, then by lexicographically smaller order. Throws ConfigError when
// the network exceeds max_exhaustive_nodes.
RouteSolution exhaustive_best_order(const Network& net, double bits, const SearchConfig& cfg);

// Starts from the direct order (source, destination) and repeatedly applies
// the single node insertion with the largest delay decrease, until no
// insertion improves by more than tol*(1+delay). Candidate ties go to the
// smaller (node id, position).
RouteSolution greedy_insertion_search(const Network& net, double bits, const SearchConfig& cfg);

// Hill-climbs from init over the neighborhood {swap two relays, remove one
// relay, move one relay to another position, insert one unused node}. Accepts
// the best strict improvement each round; never returns a worse solution than
// init.
RouteSolution local_search_swaps(const Network& net, double bits, const RouteSolution& init,
                                 const SearchConfig& cfg);

}  // namespace mia
