#include "mia/allocation.hpp"

#include <algorithm>
#include <cmath>

namespace mia {

const char* to_string(Semantics semantics) {
    return semantics == Semantics::Orthogonal ? "orthogonal" : "broadcast_all";
}

Semantics parse_semantics(const std::string& name) {
    if (name == "orthogonal") return Semantics::Orthogonal;
    if (name == "broadcast_all") return Semantics::BroadcastAll;
    throw ConfigError("unknown semantics \"" + name +
                      "\" (expected \"orthogonal\" or \"broadcast_all\")");
}

void TransmissionOrder::validate(const Network& net) const {
    if (nodes.size() < 2) throw ConfigError("transmission order needs at least 2 nodes");
    std::vector<bool> seen(net.size(), false);
    for (int id : nodes) {
        if (id < 0 || static_cast<std::size_t>(id) >= net.size())
            throw ConfigError("transmission order references unknown node " + std::to_string(id));
        if (seen[id])
            throw ConfigError("transmission order repeats node " + std::to_string(id));
        seen[id] = true;
    }
    if (nodes.front() != net.source)
        throw ConfigError("transmission order must start at the source");
    if (nodes.back() != net.destination)
        throw ConfigError("transmission order must end at the destination");
}

namespace {

// Orthogonal variable layout: x_{k,m} at k(k-1)/2 + m.
std::size_t var_index(std::size_t k, std::size_t m) { return k * (k - 1) / 2 + m; }

void check_order_against_rates(const TransmissionOrder& order, const RateMatrix& rates) {
    if (order.nodes.size() < 2) throw ConfigError("transmission order needs at least 2 nodes");
    for (int id : order.nodes)
        if (id < 0 || static_cast<std::size_t>(id) >= rates.size())
            throw ConfigError("transmission order references unknown node " + std::to_string(id));
    for (std::size_t k = 1; k < order.nodes.size(); ++k) {
        bool reachable = false;
        for (std::size_t m = 0; m < k && !reachable; ++m)
            reachable = rates(order.nodes[m], order.nodes[k]) > 0.0;
        if (!reachable)
            throw InfeasibleOrderError("node " + std::to_string(order.nodes[k]) +
                                       " hears none of its predecessors in this order");
    }
}

Allocation allocation_from_x(const TransmissionOrder& order, const std::vector<double>& x,
                             Semantics semantics) {
    const std::size_t K = order.num_phases();
    Allocation alloc;
    alloc.semantics = semantics;
    alloc.phases.resize(K);
    double total = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        if (semantics == Semantics::Orthogonal) {
            auto& phase = alloc.phases[k - 1];
            phase.resize(k);
            for (std::size_t m = 0; m < k; ++m) {
                phase[m] = std::max(0.0, x[var_index(k, m)]);
                total += phase[m];
            }
        } else {
            const double len = std::max(0.0, x[k - 1]);
            alloc.phases[k - 1] = {len};
            total += len;
        }
    }
    alloc.delay = total;
    return alloc;
}

// Objective coefficients of the energy expression over the delay-LP variables.
std::vector<double> energy_objective(const TransmissionOrder& order,
                                     const std::vector<double>& power_by_id, Semantics semantics) {
    const std::size_t K = order.num_phases();
    if (semantics == Semantics::Orthogonal) {
        std::vector<double> c(var_index(K + 1, 0), 0.0);
        for (std::size_t k = 1; k <= K; ++k)
            for (std::size_t m = 0; m < k; ++m)
                c[var_index(k, m)] = power_by_id.at(order.nodes[m]);
        return c;
    }
    std::vector<double> c(K, 0.0);
    double sum = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        sum += power_by_id.at(order.nodes[k - 1]);
        c[k - 1] = sum;
    }
    return c;
}

Allocation solve_allocation_lp(const TransmissionOrder& order, LpProblem p, Semantics semantics,
                               double tol, const char* what) {
    const LpSolution sol = solve(p, tol);
    if (sol.status != LpStatus::Optimal)
        throw InternalError(std::string(what) + " LP came back " + to_string(sol.status) +
                            "; impossible by construction");
    return allocation_from_x(order, sol.x, semantics);
}

}  // namespace

LpProblem build_delay_lp(const TransmissionOrder& order, const RateMatrix& rates, double bits,
                         Semantics semantics) {
    if (!(bits > 0.0)) throw DomainError("bits must be > 0");
    check_order_against_rates(order, rates);
    const std::size_t K = order.num_phases();

    LpProblem p;
    const std::size_t n = (semantics == Semantics::Orthogonal) ? var_index(K + 1, 0) : K;
    p.c.assign(n, 1.0);
    p.A.assign(K, std::vector<double>(n, 0.0));
    p.b.assign(K, bits);

    for (std::size_t k = 1; k <= K; ++k) {
        auto& row = p.A[k - 1];
        const int receiver = order.nodes[k];
        for (std::size_t j = 1; j <= k; ++j) {
            if (semantics == Semantics::Orthogonal) {
                for (std::size_t m = 0; m < j; ++m)
                    row[var_index(j, m)] = rates(order.nodes[m], receiver);
            } else {
                double sum = 0.0;
                for (std::size_t m = 0; m < j; ++m) sum += rates(order.nodes[m], receiver);
                row[j - 1] = sum;
            }
        }
    }
    return p;
}

Allocation optimal_allocation(const TransmissionOrder& order, const RateMatrix& rates, double bits,
                              Semantics semantics, double tol) {
    return solve_allocation_lp(order, build_delay_lp(order, rates, bits, semantics), semantics, tol,
                               "delay");
}

Allocation greedy_forward_allocation(const TransmissionOrder& order, const RateMatrix& rates,
                                     double bits) {
    if (!(bits > 0.0)) throw DomainError("bits must be > 0");
    check_order_against_rates(order, rates);
    const std::size_t K = order.num_phases();

    Allocation alloc;
    alloc.semantics = Semantics::Orthogonal;
    alloc.phases.resize(K);
    std::vector<double> acc(order.nodes.size(), 0.0);  // bits heard so far, by position

    for (std::size_t k = 1; k <= K; ++k) {
        alloc.phases[k - 1].assign(k, 0.0);
        const double residual = bits - acc[k];
        if (residual <= 0.0) continue;
        std::size_t best = 0;
        double best_rate = rates(order.nodes[0], order.nodes[k]);
        for (std::size_t m = 1; m < k; ++m) {
            const double r = rates(order.nodes[m], order.nodes[k]);
            if (r > best_rate) {
                best_rate = r;
                best = m;
            }
        }
        const double t = residual / best_rate;
        alloc.phases[k - 1][best] = t;
        alloc.delay += t;
        for (std::size_t j = k; j < order.nodes.size(); ++j)
            acc[j] += t * rates(order.nodes[best], order.nodes[j]);
    }
    return alloc;
}

double energy_of(const Allocation& alloc, const std::vector<double>& power_by_id,
                 const TransmissionOrder& order) {
    if (alloc.phases.size() != order.num_phases())
        throw DimensionError("allocation has " + std::to_string(alloc.phases.size()) +
                             " phases for an order with " + std::to_string(order.num_phases()));
    double energy = 0.0;
    for (std::size_t k = 1; k <= alloc.phases.size(); ++k) {
        const auto& phase = alloc.phases[k - 1];
        if (alloc.semantics == Semantics::Orthogonal) {
            if (phase.size() != k)
                throw DimensionError("phase " + std::to_string(k) + " has wrong arity");
            for (std::size_t m = 0; m < k; ++m)
                energy += power_by_id.at(order.nodes[m]) * phase[m];
        } else {
            if (phase.size() != 1)
                throw DimensionError("phase " + std::to_string(k) + " has wrong arity");
            double psum = 0.0;
            for (std::size_t m = 0; m < k; ++m) psum += power_by_id.at(order.nodes[m]);
            energy += phase[0] * psum;
        }
    }
    return energy;
}

double energy_of(const Allocation& alloc, const Network& net, const TransmissionOrder& order) {
    std::vector<double> power(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) power[i] = net.nodes[i].power;
    return energy_of(alloc, power, order);
}

Allocation min_energy_allocation(const TransmissionOrder& order, const Network& net, double bits,
                                 Semantics semantics, double tol) {
    std::vector<double> power(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) power[i] = net.nodes[i].power;
    LpProblem p = build_delay_lp(order, rate_matrix(net), bits, semantics);
    p.c = energy_objective(order, power, semantics);
    Allocation alloc = solve_allocation_lp(order, std::move(p), semantics, tol, "energy");
    alloc.energy = energy_of(alloc, power, order);
    return alloc;
}

Allocation delay_optimal_allocation(const TransmissionOrder& order, const RateMatrix& rates,
                                    const std::vector<double>& power_by_id, double bits,
                                    Semantics semantics, double tol) {
    LpProblem p = build_delay_lp(order, rates, bits, semantics);
    const LpSolution stage1 = solve(p, tol);
    if (stage1.status != LpStatus::Optimal)
        throw InternalError(std::string("delay LP came back ") + to_string(stage1.status) +
                            "; impossible by construction");

    // Stage 2: minimize energy among the delay-optimal allocations. The cap
    // delay <= T* is exact: the stage-1 vertex satisfies it, and a <= row is
    // feasible at the origin, so it cannot make phase 1 fail.
    p.c = energy_objective(order, power_by_id, semantics);
    p.A.emplace_back(p.c.size(), -1.0);
    p.b.push_back(-stage1.objective);
    Allocation alloc = solve_allocation_lp(order, std::move(p), semantics, tol, "tie-break");
    alloc.energy = energy_of(alloc, power_by_id, order);
    return alloc;
}

Allocation delay_optimal_allocation(const TransmissionOrder& order, const Network& net, double bits,
                                    Semantics semantics, double tol) {
    std::vector<double> power(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) power[i] = net.nodes[i].power;
    return delay_optimal_allocation(order, rate_matrix(net), power, bits, semantics, tol);
}

}  // namespace mia
