#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "mia/baseline.hpp"
#include "mia/distsim.hpp"
#include "mia/errors.hpp"
#include "mia/netmodel.hpp"
#include "mia/ordersearch.hpp"
#include "oracle_helpers.hpp"

namespace {

mia::Network net_with_rates(int n, const std::vector<std::vector<double>>& rates,
                            std::vector<double> powers = {}) {
    mia::Network net;
    for (int i = 0; i < n; ++i)
        net.nodes.push_back({i, static_cast<double>(i), 0.0,
                             powers.empty() ? 1.0 : powers[static_cast<std::size_t>(i)]});
    net.source = 0;
    net.destination = n - 1;
    mia::RateMatrix r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                                        rates[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    net.rate_override = r;
    return net;
}

mia::Network fast_relay_triangle() {
    return net_with_rates(3, {{0.0, 4.0, 1.0},
                              {0.0, 0.0, 4.0},
                              {0.0, 0.0, 0.0}});
}

// Replays a trace from first principles: integrates accumulation and transmit
// energy over the piecewise-constant transmitter set and checks that every
// decode fires exactly when the integral reaches the message size.
void replay_trace(const mia::Network& net, double bits, const mia::DistributedOutcome& out) {
    const auto rates = mia::rate_matrix(net);
    const std::size_t n = net.size();
    std::vector<double> acc(n, 0.0);
    std::vector<bool> decoded(n, false);
    decoded[static_cast<std::size_t>(out.source)] = true;
    std::set<int> active;
    double t = 0.0;
    double energy = 0.0;

    for (const auto& ev : out.trace) {
        REQUIRE(ev.time >= t - 1e-12);
        const double dt = ev.time - t;
        if (dt > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                if (decoded[i]) continue;
                double r = 0.0;
                for (int a : active) r += rates(static_cast<std::size_t>(a), i);
                acc[i] += r * dt;
            }
            for (int a : active) energy += net.nodes[static_cast<std::size_t>(a)].power * dt;
            t = ev.time;
        }
        switch (ev.kind) {
            case mia::TraceEvent::Kind::TxStart:
                REQUIRE(active.insert(ev.node).second);  // was not transmitting
                // Only nodes holding the message may transmit.
                CHECK(decoded[static_cast<std::size_t>(ev.node)]);
                break;
            case mia::TraceEvent::Kind::TxStop:
                REQUIRE(active.erase(ev.node) == 1);
                break;
            case mia::TraceEvent::Kind::Decoded:
                REQUIRE_FALSE(decoded[static_cast<std::size_t>(ev.node)]);
                CHECK(acc[static_cast<std::size_t>(ev.node)] ==
                      doctest::Approx(bits).epsilon(1e-6));
                decoded[static_cast<std::size_t>(ev.node)] = true;
                break;
        }
    }

    REQUIRE_FALSE(out.trace.empty());
    CHECK(out.trace.back().kind == mia::TraceEvent::Kind::Decoded);
    CHECK(out.trace.back().node == out.destination);
    CHECK(out.trace.back().time == doctest::Approx(out.delay).epsilon(1e-12));
    CHECK(energy == doctest::Approx(out.energy).epsilon(1e-9));
    CHECK(active.empty());  // every transmitter was stopped by the end
}

}  // namespace

TEST_CASE("two nodes: the source transmits until the destination decodes") {
    const auto net = net_with_rates(2, {{0.0, 2.0}, {0.0, 0.0}}, {0.5, 1.0});
    for (auto policy :
         {mia::Policy::LatestDecoder, mia::Policy::RoundRobin, mia::Policy::BroadcastAll}) {
        const auto out = mia::simulate_distributed(net, 3.0, policy, 0.1);
        CHECK(out.delay == doctest::Approx(1.5).epsilon(1e-9));
        CHECK(out.energy == doctest::Approx(0.5 * 1.5).epsilon(1e-9));
        REQUIRE(out.decodes.size() == 1);
        CHECK(out.decodes[0].first == 1);
        CHECK(out.decodes[0].second == doctest::Approx(1.5).epsilon(1e-9));
        replay_trace(net, 3.0, out);
    }
}

TEST_CASE("latest-decoder on the relay triangle follows the hand schedule") {
    const auto net = fast_relay_triangle();
    const auto out = mia::simulate_distributed(net, 1.0, mia::Policy::LatestDecoder);
    CHECK(out.delay == doctest::Approx(0.4375).epsilon(1e-9));
    CHECK(out.energy == doctest::Approx(0.4375).epsilon(1e-9));  // unit powers
    REQUIRE(out.decodes.size() == 2);
    CHECK(out.decodes[0] == std::pair<int, double>{1, 0.25});
    CHECK(out.decodes[1].first == 2);
    CHECK(out.decodes[1].second == doctest::Approx(0.4375).epsilon(1e-9));

    // Exact event sequence: handover at the relay's decode, and the
    // destination's decode closes the trace after the final tx_stop.
    REQUIRE(out.trace.size() == 6);
    using K = mia::TraceEvent::Kind;
    CHECK(out.trace[0].kind == K::TxStart);
    CHECK(out.trace[0].node == 0);
    CHECK(out.trace[0].time == 0.0);
    CHECK(out.trace[1].kind == K::Decoded);
    CHECK(out.trace[1].node == 1);
    CHECK(out.trace[2].kind == K::TxStop);
    CHECK(out.trace[2].node == 0);
    CHECK(out.trace[3].kind == K::TxStart);
    CHECK(out.trace[3].node == 1);
    CHECK(out.trace[3].time == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(out.trace[4].kind == K::TxStop);
    CHECK(out.trace[4].node == 1);
    CHECK(out.trace[5].kind == K::Decoded);
    CHECK(out.trace[5].node == 2);

    const auto order = mia::decode_order_of(out);
    CHECK(order.nodes == std::vector<int>{0, 1, 2});
    replay_trace(net, 1.0, out);
}

TEST_CASE("broadcast on the relay triangle adds the relay without silencing the source") {
    const auto net = fast_relay_triangle();
    const auto out = mia::simulate_distributed(net, 1.0, mia::Policy::BroadcastAll);
    // Relay decodes at 1/4; thereafter the destination accumulates at 1 + 4.
    CHECK(out.delay == doctest::Approx(0.4).epsilon(1e-9));
    // 1 W for 0.4 s from the source plus 1 W for 0.15 s from the relay.
    CHECK(out.energy == doctest::Approx(0.55).epsilon(1e-9));
    // The source never stops while the relay joins mid-flight.
    bool source_stopped_early = false;
    for (const auto& ev : out.trace)
        if (ev.kind == mia::TraceEvent::Kind::TxStop && ev.node == 0 && ev.time < 0.4)
            source_stopped_early = true;
    CHECK_FALSE(source_stopped_early);
    replay_trace(net, 1.0, out);
}

TEST_CASE("round robin alternates decoded nodes on quantum boundaries") {
    const auto net = fast_relay_triangle();
    // With q = 0.05 the relay decodes exactly at a slot edge (t = 0.25); the
    // rotation then alternates relay/source and the destination closes at
    // 0.55 s having heard 0.25 + 3*0.05 s of the source and 3*0.05 s of the
    // relay: 0.40*1 + 0.15*4 = 1 bit.
    const auto out = mia::simulate_distributed(net, 1.0, mia::Policy::RoundRobin, 0.05);
    CHECK(out.delay == doctest::Approx(0.55).epsilon(1e-9));
    CHECK(out.energy == doctest::Approx(0.55).epsilon(1e-9));  // unit powers, one tx at a time
    CHECK(out.decodes.front() == std::pair<int, double>{1, 0.25});
    replay_trace(net, 1.0, out);
}

TEST_CASE("invalid simulation arguments are faults") {
    const auto net = fast_relay_triangle();
    CHECK_THROWS_AS(mia::simulate_distributed(net, 0.0, mia::Policy::LatestDecoder),
                    mia::DomainError);
    CHECK_THROWS_AS(mia::simulate_distributed(net, -1.0, mia::Policy::BroadcastAll),
                    mia::DomainError);
    CHECK_THROWS_AS(mia::simulate_distributed(net, 1.0, mia::Policy::RoundRobin, 0.0),
                    mia::DomainError);
    CHECK_THROWS_AS(mia::simulate_distributed(net, 1.0, mia::Policy::RoundRobin, -1e-3),
                    mia::DomainError);
}

TEST_CASE("policy names round-trip and reject junk") {
    using P = mia::Policy;
    for (auto p : {P::LatestDecoder, P::RoundRobin, P::BroadcastAll})
        CHECK(mia::parse_policy(mia::to_string(p)) == p);
    CHECK_THROWS_AS(mia::parse_policy("latest"), mia::ConfigError);
    CHECK_THROWS_AS(mia::parse_policy(""), mia::ConfigError);
}

TEST_CASE("a cut-off destination stalls the simulation with a partial outcome") {
    // The relay hears the source but nothing reaches the destination.
    const auto net = net_with_rates(3, {{0.0, 1.0, 0.0},
                                        {0.0, 0.0, 0.0},
                                        {0.0, 0.0, 0.0}});
    for (auto policy :
         {mia::Policy::LatestDecoder, mia::Policy::RoundRobin, mia::Policy::BroadcastAll}) {
        try {
            mia::simulate_distributed(net, 1.0, policy, 0.25);
            FAIL("expected StalledError");
        } catch (const mia::StalledError& e) {
            REQUIRE(e.partial.decodes.size() == 1);
            CHECK(e.partial.decodes[0].first == 1);
            CHECK(e.partial.decodes[0].second == doctest::Approx(1.0).epsilon(1e-9));
            // The partial outcome has no destination decode, so no emergent
            // order can be read off it.
            CHECK_THROWS_AS(mia::decode_order_of(e.partial), mia::ConfigError);
        }
    }
}

TEST_CASE("decode times are monotone and unique across random networks") {
    for (std::uint64_t seed : {301ULL, 302ULL, 303ULL, 304ULL}) {
        const auto net = mia::generate_random_network(8, 120.0, seed, {}, 0.1);
        for (auto policy :
             {mia::Policy::LatestDecoder, mia::Policy::RoundRobin, mia::Policy::BroadcastAll}) {
            const auto out = mia::simulate_distributed(net, 1e6, policy);
            REQUIRE_FALSE(out.decodes.empty());
            CHECK(out.decodes.back().first == net.destination);
            CHECK(out.decodes.back().second == doctest::Approx(out.delay).epsilon(1e-12));
            std::set<int> seen = {net.source};
            double prev = 0.0;
            for (const auto& [node, time] : out.decodes) {
                CHECK(seen.insert(node).second);  // nobody decodes twice
                CHECK(time >= prev - 1e-12);
                prev = time;
            }
            replay_trace(net, 1e6, out);
        }
    }
}

TEST_CASE("a realized schedule is feasible for its own decode order's program") {
    // The simulation's schedule satisfies the accumulation constraints of the
    // order it happened to realize, so the order's optimal delay bounds it.
    for (std::uint64_t seed : {881ULL, 882ULL, 883ULL}) {
        const auto net = mia::generate_random_network(6, 100.0, seed, {}, 0.1);
        const auto rates = mia::rate_matrix(net);
        for (auto policy :
             {mia::Policy::LatestDecoder, mia::Policy::RoundRobin, mia::Policy::BroadcastAll}) {
            const auto out = mia::simulate_distributed(net, 1e6, policy);
            const auto order = mia::decode_order_of(out);
            const auto sem = policy == mia::Policy::BroadcastAll ? mia::Semantics::BroadcastAll
                                                                 : mia::Semantics::Orthogonal;
            const auto best = mia::optimal_allocation(order, rates, 1e6, sem);
            CHECK(out.delay >= best.delay - 1e-9 * (1.0 + best.delay));
        }
    }
}

TEST_CASE("no policy beats the exhaustive optimum of its own semantics") {
    for (std::uint64_t seed : {55ULL, 56ULL, 57ULL, 58ULL}) {
        const auto net = mia::generate_random_network(5, 100.0, seed, {}, 0.1);
        mia::SearchConfig orth;
        mia::SearchConfig bcast;
        bcast.semantics = mia::Semantics::BroadcastAll;
        const double best_orth = mia::exhaustive_best_order(net, 1e6, orth).allocation.delay;
        const double best_bcast = mia::exhaustive_best_order(net, 1e6, bcast).allocation.delay;
        for (auto policy :
             {mia::Policy::LatestDecoder, mia::Policy::RoundRobin, mia::Policy::BroadcastAll}) {
            const auto out = mia::simulate_distributed(net, 1e6, policy);
            const double ref =
                policy == mia::Policy::BroadcastAll ? best_bcast : best_orth;
            CHECK(out.delay >= ref - 1e-9 * (1.0 + ref));
        }
    }
}

TEST_CASE("trace CSV carries a header and one row per event") {
    const auto net = fast_relay_triangle();
    const auto out = mia::simulate_distributed(net, 1.0, mia::Policy::LatestDecoder);
    std::ostringstream os;
    mia::write_trace_csv(out, os);
    const std::string text = os.str();

    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) lines.push_back(line);
    REQUIRE(lines.size() == out.trace.size() + 1);
    CHECK(lines[0] == "time_s,node_id,event");
    CHECK(lines[1] == "0,0,tx_start");
    CHECK(lines[2] == "0.25,1,decoded");
    CHECK(lines.back() == "0.4375,2,decoded");
}
