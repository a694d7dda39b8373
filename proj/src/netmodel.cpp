#include "mia/netmodel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mia/prng.hpp"

namespace mia {

void Network::validate() const {
    const std::size_t n = nodes.size();
    if (n < 2) throw ConfigError("network needs at least 2 nodes, got " + std::to_string(n));
    std::vector<bool> seen(n, false);
    for (const Node& node : nodes) {
        if (node.id < 0 || static_cast<std::size_t>(node.id) >= n)
            throw ConfigError("node id " + std::to_string(node.id) + " outside 0.." +
                              std::to_string(n - 1));
        if (seen[node.id]) throw ConfigError("duplicate node id " + std::to_string(node.id));
        seen[node.id] = true;
        if (!(node.power > 0.0))
            throw ConfigError("node " + std::to_string(node.id) + " has nonpositive power");
        if (!std::isfinite(node.x) || !std::isfinite(node.y))
            throw ConfigError("node " + std::to_string(node.id) + " has non-finite position");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (nodes[i].id != static_cast<int>(i))
            throw ConfigError("nodes must be stored in id order");
    auto check_endpoint = [&](int id, const char* name) {
        if (id < 0 || static_cast<std::size_t>(id) >= n)
            throw ConfigError(std::string(name) + " id " + std::to_string(id) + " unknown");
    };
    check_endpoint(source, "source");
    check_endpoint(destination, "destination");
    if (source == destination) throw ConfigError("source equals destination");
    if (!(params.alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
    if (!(params.noise_psd > 0.0)) throw ConfigError("noise_psd must be > 0");
    if (!(params.bandwidth > 0.0)) throw ConfigError("bandwidth must be > 0");
    if (!(params.d_min > 0.0)) throw ConfigError("d_min must be > 0");
    if (rate_override) {
        if (rate_override->size() != n) throw ConfigError("rates matrix size != node count");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double r = (*rate_override)(i, j);
                if (!(r >= 0.0) || !std::isfinite(r))
                    throw ConfigError("rates matrix has a negative or non-finite entry");
                if (i == j && r != 0.0) throw ConfigError("rates matrix diagonal must be zero");
            }
    }
}

double path_gain(double distance, double alpha, double d_min) {
    if (distance < 0.0) throw DomainError("negative distance");
    if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
    if (!(d_min > 0.0)) throw DomainError("d_min must be > 0");
    return std::pow(std::max(distance, d_min), -alpha);
}

double link_rate(double power, double gain, const ChannelParams& params) {
    if (!(power > 0.0)) throw DomainError("power must be > 0");
    if (gain == 0.0) return 0.0;
    const double snr = power * gain / (params.noise_psd * params.bandwidth);
    return params.bandwidth * std::log2(1.0 + snr);
}

RateMatrix rate_matrix(const Network& net) {
    if (net.rate_override) return *net.rate_override;
    const std::size_t n = net.size();
    RateMatrix rates(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dx = net.nodes[i].x - net.nodes[j].x;
            const double dy = net.nodes[i].y - net.nodes[j].y;
            const double d = std::hypot(dx, dy);
            const double g = path_gain(d, net.params.alpha, net.params.d_min);
            rates(i, j) = link_rate(net.nodes[i].power, g, net.params);
        }
    }
    return rates;
}

Network generate_random_network(int n, double side, std::uint64_t seed,
                                const ChannelParams& params, double power) {
    if (n < 2) throw ConfigError("generate_random_network needs n >= 2, got " + std::to_string(n));
    if (!(side > 0.0)) throw ConfigError("side must be > 0");
    if (!(power > 0.0)) throw ConfigError("power must be > 0");
    Network net;
    net.params = params;
    net.nodes.reserve(n);
    Xoshiro256ss rng(seed);
    for (int i = 0; i < n; ++i) {
        Node node;
        node.id = i;
        node.x = side * rng.next_unit();
        node.y = side * rng.next_unit();
        node.power = power;
        net.nodes.push_back(node);
    }
    net.source = 0;
    net.destination = n - 1;
    net.validate();
    return net;
}

namespace {

using nlohmann::json;

double require_number(const json& obj, const char* field, const char* context) {
    if (!obj.contains(field))
        throw ParseError(std::string(context) + ": missing \"" + field + "\"");
    const json& v = obj.at(field);
    if (!v.is_number())
        throw ParseError(std::string(context) + ": \"" + field + "\" must be a number");
    return v.get<double>();
}

int require_int(const json& obj, const char* field, const char* context) {
    if (!obj.contains(field))
        throw ParseError(std::string(context) + ": missing \"" + field + "\"");
    const json& v = obj.at(field);
    if (!v.is_number_integer())
        throw ParseError(std::string(context) + ": \"" + field + "\" must be an integer");
    return v.get<int>();
}

}  // namespace

Network network_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("network file: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("network file: top level must be an object");

    Network net;
    if (!doc.contains("params")) throw ParseError("network file: missing \"params\"");
    const json& p = doc.at("params");
    net.params.alpha = require_number(p, "alpha", "params");
    net.params.noise_psd = require_number(p, "noise_psd", "params");
    net.params.bandwidth = require_number(p, "bandwidth", "params");
    net.params.d_min = require_number(p, "d_min", "params");

    if (!doc.contains("nodes")) throw ParseError("network file: missing \"nodes\"");
    const json& nodes = doc.at("nodes");
    if (!nodes.is_array()) throw ParseError("network file: \"nodes\" must be an array");
    const std::size_t n = nodes.size();
    net.nodes.resize(n);
    std::vector<bool> seen(n, false);
    for (const json& jn : nodes) {
        Node node;
        node.id = require_int(jn, "id", "nodes");
        node.x = require_number(jn, "x", "nodes");
        node.y = require_number(jn, "y", "nodes");
        node.power = require_number(jn, "power", "nodes");
        if (node.id < 0 || static_cast<std::size_t>(node.id) >= n)
            throw ParseError("nodes: id " + std::to_string(node.id) + " outside 0.." +
                             std::to_string(n == 0 ? 0 : n - 1));
        if (seen[node.id]) throw ParseError("nodes: duplicate id " + std::to_string(node.id));
        seen[node.id] = true;
        net.nodes[node.id] = node;
    }

    net.source = require_int(doc, "source", "network file");
    net.destination = require_int(doc, "destination", "network file");

    if (doc.contains("rates")) {
        const json& rows = doc.at("rates");
        if (!rows.is_array() || rows.size() != n)
            throw ParseError("network file: \"rates\" must be an n x n array");
        RateMatrix rates(n);
        for (std::size_t i = 0; i < n; ++i) {
            const json& row = rows.at(i);
            if (!row.is_array() || row.size() != n)
                throw ParseError("network file: \"rates\" row " + std::to_string(i) +
                                 " has wrong length");
            for (std::size_t j = 0; j < n; ++j) {
                if (!row.at(j).is_number())
                    throw ParseError("network file: \"rates\" entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") must be a number");
                rates(i, j) = row.at(j).get<double>();
            }
        }
        net.rate_override = std::move(rates);
    }

    try {
        net.validate();
    } catch (const ConfigError& e) {
        throw ParseError(std::string("network file: ") + e.what());
    }
    return net;
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return network_from_json_text(buf.str());
}

std::string network_to_json_text(const Network& net) {
    nlohmann::ordered_json doc;
    doc["params"] = {{"alpha", net.params.alpha},
                     {"noise_psd", net.params.noise_psd},
                     {"bandwidth", net.params.bandwidth},
                     {"d_min", net.params.d_min}};
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const Node& node : net.nodes)
        doc["nodes"].push_back(
            {{"id", node.id}, {"x", node.x}, {"y", node.y}, {"power", node.power}});
    doc["source"] = net.source;
    doc["destination"] = net.destination;
    if (net.rate_override) {
        auto rows = nlohmann::ordered_json::array();
        const std::size_t n = net.rate_override->size();
        for (std::size_t i = 0; i < n; ++i) {
            auto row = nlohmann::ordered_json::array();
            for (std::size_t j = 0; j < n; ++j) row.push_back((*net.rate_override)(i, j));
            rows.push_back(std::move(row));
        }
        doc["rates"] = std::move(rows);
    }
    return doc.dump(2) + "\n";
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write network file: " + path);
    out << network_to_json_text(net);
    if (!out) throw ParseError("failed writing network file: " + path);
}

}  // namespace mia
