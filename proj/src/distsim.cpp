#include "mia/distsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace mia {

const char* to_string(Policy policy) {
    switch (policy) {
        case Policy::LatestDecoder: return "latest_decoder";
        case Policy::RoundRobin: return "round_robin";
        case Policy::BroadcastAll: return "broadcast_all";
    }
    return "?";
}

Policy parse_policy(const std::string& name) {
    if (name == "latest_decoder") return Policy::LatestDecoder;
    if (name == "round_robin") return Policy::RoundRobin;
    if (name == "broadcast_all") return Policy::BroadcastAll;
    throw ConfigError("unknown policy \"" + name +
                      "\" (expected \"latest_decoder\", \"round_robin\" or \"broadcast_all\")");
}

const char* to_string(TraceEvent::Kind kind) {
    switch (kind) {
        case TraceEvent::Kind::Decoded: return "decoded";
        case TraceEvent::Kind::TxStart: return "tx_start";
        case TraceEvent::Kind::TxStop: return "tx_stop";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DistributedOutcome simulate_distributed(const Network& net, double bits, Policy policy,
                                        double rr_quantum) {
    net.validate();
    if (!(bits > 0.0)) throw DomainError("bits must be > 0");
    if (policy == Policy::RoundRobin && !(rr_quantum > 0.0))
        throw DomainError("round-robin quantum must be > 0");

    const RateMatrix rates = rate_matrix(net);
    const std::size_t n = net.size();

    DistributedOutcome out;
    out.policy = policy;
    out.source = net.source;
    out.destination = net.destination;

    std::vector<double> acc(n, 0.0);
    std::vector<bool> decoded(n, false);
    std::vector<int> rotation = {net.source};  // decode order; source holds the message
    decoded[net.source] = true;

    double t = 0.0;
    long slot = 0;         // RoundRobin: quantum index, transmitter switches at slot edges
    std::size_t rr_pos = 0;  // RoundRobin: current position in the rotation
    std::vector<int> active_prev;

    auto current_active = [&]() -> std::vector<int> {
        switch (policy) {
            case Policy::LatestDecoder: return {rotation.back()};
            case Policy::RoundRobin: return {rotation[rr_pos]};
            case Policy::BroadcastAll: {
                std::vector<int> act = rotation;
                std::sort(act.begin(), act.end());
                return act;
            }
        }
        return {};
    };

    auto emit_tx_diff = [&](const std::vector<int>& active) {
        for (int id : active_prev)
            if (std::find(active.begin(), active.end(), id) == active.end())
                out.trace.push_back({t, id, TraceEvent::Kind::TxStop});
        for (int id : active)
            if (std::find(active_prev.begin(), active_prev.end(), id) == active_prev.end())
                out.trace.push_back({t, id, TraceEvent::Kind::TxStart});
        active_prev = active;
    };

    auto stall = [&](const char* why) -> StalledError {
        out.delay = t;
        return StalledError(std::string("distributed simulation stalled: ") + why, out);
    };

    for (;;) {
        const std::vector<int> active = current_active();
        emit_tx_diff(active);

        // Accumulation rate into each undecoded node from the active set.
        std::vector<double> rate_into(n, 0.0);
        bool progress = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (decoded[i]) continue;
            for (int a : active) rate_into[i] += rates(a, static_cast<int>(i));
            if (rate_into[i] > 0.0) progress = true;
        }

        const double next_boundary =
            (policy == Policy::RoundRobin) ? (static_cast<double>(slot + 1) * rr_quantum) : kInf;

        if (!progress) {
            if (policy != Policy::RoundRobin) throw stall("no undecoded node is accumulating");
            // The current turn is useless; a later turn may not be.
            bool any_member_helps = false;
            for (int m : rotation)
                for (std::size_t i = 0; i < n && !any_member_helps; ++i)
                    if (!decoded[i] && rates(m, static_cast<int>(i)) > 0.0) any_member_helps = true;
            if (!any_member_helps) throw stall("no decoded node reaches any undecoded node");
            double psum = 0.0;
            for (int a : active) psum += net.nodes[a].power;
            out.energy += psum * (next_boundary - t);
            t = next_boundary;
            ++slot;
            rr_pos = (rr_pos + 1) % rotation.size();
            continue;
        }

        // Earliest decode under the current transmitter set.
        double next_decode = kInf;
        std::vector<double> decode_at(n, kInf);
        for (std::size_t i = 0; i < n; ++i) {
            if (decoded[i] || rate_into[i] <= 0.0) continue;
            const double residual = bits - acc[i];
            // Rounding may nudge an accumulator past `bits` between events;
            // such a node decodes now rather than in the past.
            decode_at[i] = (residual <= 0.0) ? t : t + residual / rate_into[i];
            next_decode = std::min(next_decode, decode_at[i]);
        }

        const double t_next = std::min(next_decode, next_boundary);
        const double dt = t_next - t;
        for (std::size_t i = 0; i < n; ++i)
            if (!decoded[i]) acc[i] += rate_into[i] * dt;
        double psum = 0.0;
        for (int a : active) psum += net.nodes[a].power;
        out.energy += psum * dt;
        t = t_next;

        if (t_next == next_decode) {
            // Process every node whose decode lands exactly now, id order;
            // destination closes the trace.
            bool dest_decoded = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (decoded[i] || decode_at[i] != next_decode) continue;
                acc[i] = bits;
                decoded[i] = true;
                if (static_cast<int>(i) == net.destination) {
                    dest_decoded = true;
                    continue;
                }
                rotation.push_back(static_cast<int>(i));
                out.decodes.emplace_back(static_cast<int>(i), t);
                out.trace.push_back({t, static_cast<int>(i), TraceEvent::Kind::Decoded});
            }
            if (dest_decoded) {
                for (int id : active_prev) out.trace.push_back({t, id, TraceEvent::Kind::TxStop});
                out.decodes.emplace_back(net.destination, t);
                out.trace.push_back({t, net.destination, TraceEvent::Kind::Decoded});
                out.delay = t;
                return out;
            }
        }
        if (policy == Policy::RoundRobin && t == next_boundary) {
            ++slot;
            rr_pos = (rr_pos + 1) % rotation.size();
        }
    }
}

TransmissionOrder decode_order_of(const DistributedOutcome& outcome) {
    TransmissionOrder order;
    order.nodes.push_back(outcome.source);
    for (const auto& [node, time] : outcome.decodes) {
        (void)time;
        order.nodes.push_back(node);
    }
    if (order.nodes.size() < 2 || order.nodes.back() != outcome.destination)
        throw ConfigError("outcome does not end with a destination decode");
    return order;
}

void write_trace_csv(const DistributedOutcome& outcome, std::ostream& out) {
    out << "time_s,node_id,event\n";
    char buf[40];
    for (const TraceEvent& ev : outcome.trace) {
        std::snprintf(buf, sizeof buf, "%.17g", ev.time);
        out << buf << ',' << ev.node << ',' << to_string(ev.kind) << '\n';
    }
}

void write_trace_csv(const DistributedOutcome& outcome, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ParseError("cannot write trace file: " + path);
    write_trace_csv(outcome, f);
}

}  // namespace mia
