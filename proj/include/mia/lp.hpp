#pragma once

#include <cstddef>
#include <vector>

#include "mia/errors.hpp"

namespace mia {

// Dense linear program: minimize c.x subject to A.x >= b, x >= 0.
struct LpProblem {
    std::vector<double> c;               // length n
    std::vector<std::vector<double>> A;  // m rows, each of length n
    std::vector<double> b;               // length m

    std::size_t num_vars() const { return c.size(); }
    std::size_t num_constraints() const { return b.size(); }

    // Throws DimensionError on inconsistent sizes, DomainError on non-finite
    // entries. Zero rows, zero columns and a zero objective are permitted.
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;     // primal vector (empty unless Optimal)
    double objective = 0.0;    // c.x when Optimal
    int iterations = 0;        // simplex pivots over both phases
};

// Two-phase tableau simplex with Bland's anti-cycling rule, so identical
// problems always pivot identically and yield identical solutions. tol is a
// hybrid relative-absolute tolerance used for pivoting and the phase-1
// feasibility decision; it must lie in (0, 1e-3].
//
// Infeasible and Unbounded are reported as statuses. Dimension mismatches and
// non-finite inputs are faults (exceptions).
LpSolution solve(const LpProblem& p, double tol = 1e-9);

// True iff A.x >= b - tol*(1+|b|) componentwise and x >= -tol componentwise.
bool check_feasible(const LpProblem& p, const std::vector<double>& x, double tol = 1e-9);

}  // namespace mia
