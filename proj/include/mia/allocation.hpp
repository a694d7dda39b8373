#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mia/lp.hpp"
#include "mia/netmodel.hpp"

namespace mia {

// How transmitters share the channel within a phase.
//   Orthogonal:   one node at a time occupies the time-bandwidth resource;
//                 delay equals total allocated time. Default.
//   BroadcastAll: every decoded node transmits simultaneously; a receiver
//                 accumulates at the sum of its incoming link rates.
enum class Semantics { Orthogonal, BroadcastAll };

const char* to_string(Semantics semantics);

// Inverse of to_string; throws ConfigError on anything else.
Semantics parse_semantics(const std::string& name);

// Ordered subset of node ids v_0..v_K: source first, destination last, no
// repeats. Interior nodes are the relays; every node after the source must
// fully decode (accumulate >= B bits) before it may transmit, and the
// destination never transmits.
struct TransmissionOrder {
    std::vector<int> nodes;

    std::size_t num_phases() const { return nodes.empty() ? 0 : nodes.size() - 1; }

    // Structural check against a network: length >= 2, ids valid and unique,
    // endpoints match the network's source/destination. Throws ConfigError.
    void validate(const Network& net) const;
};

struct Allocation {
    Semantics semantics = Semantics::Orthogonal;
    // phases[k-1] holds phase k's durations in seconds: one entry per
    // transmitter v_0..v_{k-1} under Orthogonal, a single phase length under
    // BroadcastAll.
    std::vector<std::vector<double>> phases;
    double delay = 0.0;   // sum of all durations
    // Joules; NaN until powers are known (energy_of / delay_optimal_allocation
    // attach it).
    double energy = std::numeric_limits<double>::quiet_NaN();
};

struct RouteSolution {
    TransmissionOrder order;
    Allocation allocation;
    std::string method;  // exhaustive | greedy | local-search | distributed | shortest-path
};

// Delay-minimizing LP for a given order. Variables and constraints:
//   Orthogonal:   one variable per (phase k, transmitter v_m), m < k <= K,
//                 laid out phase-major (k=1 first, transmitters by m); node
//                 v_k's accumulation constraint is row k-1:
//                   sum_{j<=k} sum_{m<j} x_{j,m} C(v_m -> v_k) >= B.
//   BroadcastAll: one variable per phase length Delta_k; row k-1 is
//                   sum_{j<=k} Delta_j * sum_{m<j} C(v_m -> v_k) >= B.
// Throws InfeasibleOrderError if some node hears none of its predecessors.
LpProblem build_delay_lp(const TransmissionOrder& order, const RateMatrix& rates, double bits,
                         Semantics semantics);

// Minimum total delay for this order; durations from the LP optimum. The
// energy field is left unset (NaN) because link rates alone do not determine
// per-node powers.
Allocation optimal_allocation(const TransmissionOrder& order, const RateMatrix& rates, double bits,
                              Semantics semantics, double tol = 1e-9);

// Feasible upper-bound oracle (Orthogonal only): phase k gives time only to
// the predecessor with the best rate toward v_k, just enough to close v_k's
// residual deficit after everything it overheard earlier.
Allocation greedy_forward_allocation(const TransmissionOrder& order, const RateMatrix& rates,
                                     double bits);

// Transmit energy of an allocation in joules. Orthogonal: sum of P_{v_m} times
// v_m's transmit time. BroadcastAll: each phase burns Delta_k times the summed
// power of its transmitters.
double energy_of(const Allocation& alloc, const Network& net, const TransmissionOrder& order);
double energy_of(const Allocation& alloc, const std::vector<double>& power_by_id,
                 const TransmissionOrder& order);

// Same constraints as the delay LP with the energy expression as objective.
// Returns the energy-optimal allocation with both delay and energy filled in.
Allocation min_energy_allocation(const TransmissionOrder& order, const Network& net, double bits,
                                 Semantics semantics, double tol = 1e-9);

// Delay-optimal allocation with a well-defined reported energy: first solve
// for the minimum delay T*, then re-solve with the energy objective under the
// extra constraint delay <= T*, which picks a canonical optimum among
// delay-ties. Energy is attached.
Allocation delay_optimal_allocation(const TransmissionOrder& order, const RateMatrix& rates,
                                    const std::vector<double>& power_by_id, double bits,
                                    Semantics semantics, double tol = 1e-9);
Allocation delay_optimal_allocation(const TransmissionOrder& order, const Network& net, double bits,
                                    Semantics semantics, double tol = 1e-9);

}  // namespace mia
