#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mia/allocation.hpp"
#include "mia/netmodel.hpp"

namespace mia {

// Distributed transmitter-selection policies. Nodes react only to their own
// realized accumulation and to decode beacons; nobody sees the rate matrix.
//   LatestDecoder: the most recent decoder is the sole transmitter.
//   RoundRobin:    decoded nodes take fixed-length turns (quantum q).
//   BroadcastAll:  every decoded node transmits; rates add at the receiver.
enum class Policy { LatestDecoder, RoundRobin, BroadcastAll };

const char* to_string(Policy policy);

// Inverse of to_string; throws ConfigError on anything else.
Policy parse_policy(const std::string& name);

struct TraceEvent {
    enum class Kind { Decoded, TxStart, TxStop };
    double time = 0.0;
    int node = 0;
    Kind kind = Kind::Decoded;
};

const char* to_string(TraceEvent::Kind kind);

struct DistributedOutcome {
    Policy policy = Policy::LatestDecoder;
    int source = 0;
    int destination = 0;
    double delay = 0.0;   // destination decode time in seconds
    double energy = 0.0;  // joules spent transmitting until the destination decodes
    // Decode times of non-source nodes in decode order (destination last).
    std::vector<std::pair<int, double>> decodes;
    // Chronological events; within one instant decodes precede transmitter
    // changes, and the destination's decode closes the trace.
    std::vector<TraceEvent> trace;
};

// The simulation could not finish: no undecoded node was accumulating while
// the destination was still undecoded. Carries the partial outcome.
struct StalledError : Error {
    StalledError(const std::string& msg, DistributedOutcome partial_outcome)
        : Error(msg), partial(std::move(partial_outcome)) {}
    DistributedOutcome partial;
};

// Event-driven continuous-time simulation: the source transmits from t=0,
// each node accumulates mutual information from the active transmitter(s),
// emits an instantaneous decode beacon on reaching `bits`, and becomes
// eligible to transmit under the policy. Ends when the destination decodes.
DistributedOutcome simulate_distributed(const Network& net, double bits, Policy policy,
                                        double rr_quantum = 1e-3);

// Emergent transmission order: source first, then nodes by decode time,
// destination last. Nodes that never decoded are absent.
TransmissionOrder decode_order_of(const DistributedOutcome& outcome);

// CSV rows (time_s, node_id, event) with a header line.
void write_trace_csv(const DistributedOutcome& outcome, std::ostream& out);
void write_trace_csv(const DistributedOutcome& outcome, const std::string& path);

}  // namespace mia
