#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mia/errors.hpp"

namespace mia {

struct Node {
    int id = 0;
    double x = 0.0;   // meters
    double y = 0.0;   // meters
    double power = 0.0;  // transmit power P_i in watts
};

// Propagation and receiver-noise parameters shared by all links.
struct ChannelParams {
    double alpha = 3.0;        // path-loss exponent
    double noise_psd = 1e-12;  // N0 in W/Hz
    double bandwidth = 1e6;    // W in Hz
    double d_min = 0.01;       // distance clamp in meters
};

// Square matrix of link rates in bits/s, indexed by node id. Zero diagonal.
class RateMatrix {
  public:
    RateMatrix() = default;
    explicit RateMatrix(std::size_t n) : n_(n), v_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }

    bool operator==(const RateMatrix&) const = default;

  private:
    std::size_t n_ = 0;
    std::vector<double> v_;
};

struct Network {
    std::vector<Node> nodes;  // position in the vector equals the node id
    ChannelParams params;
    int source = 0;
    int destination = 0;
    // When present, rate_matrix() returns this verbatim instead of deriving
    // rates from geometry.
    std::optional<RateMatrix> rate_override;

    std::size_t size() const { return nodes.size(); }

    // Checks the structural invariants (>= 2 nodes, ids 0..n-1, positive
    // powers, finite positions, source != destination, well-formed override).
    // Throws ConfigError on violation.
    void validate() const;
};

// Power-law path gain max(distance, d_min)^(-alpha).
// Throws DomainError for a negative distance.
double path_gain(double distance, double alpha, double d_min);

// Shannon rate W * log2(1 + power*gain / (N0*W)) in bits/s. Zero gain gives
// zero rate.
double link_rate(double power, double gain, const ChannelParams& params);

// Pairwise rate matrix: entry (i,j) = link_rate(P_i, path_gain(d_ij)) for
// i != j, zero diagonal. An explicit override on the network is returned
// unchanged.
RateMatrix rate_matrix(const Network& net);

// n nodes placed i.i.d. uniform on [0,side]^2 with one shared transmit power.
// Node 0 is the source, node n-1 the destination. Draw order is fixed (node 0
// x, node 0 y, node 1 x, ...) over a Xoshiro256ss stream, so the result is a
// pure function of the arguments.
Network generate_random_network(int n, double side, std::uint64_t seed,
                                const ChannelParams& params, double power);

// JSON file I/O. Schema:
//   {"params": {"alpha", "noise_psd", "bandwidth", "d_min"},
//    "nodes": [{"id", "x", "y", "power"}, ...],
//    "source": id, "destination": id,
//    "rates": [[...], ...]}           (optional override, bits/s)
// Node ids must cover 0..n-1 with no repeats; nodes may appear in any order.
// Parse errors name the offending field.
Network load_network(const std::string& path);
Network network_from_json_text(const std::string& text);
void save_network(const Network& net, const std::string& path);
std::string network_to_json_text(const Network& net);

}  // namespace mia
