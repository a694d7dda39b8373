#include "mia/lp.hpp"

#include <cmath>
#include <limits>

namespace mia {

void LpProblem::validate() const {
    const std::size_t n = num_vars();
    const std::size_t m = num_constraints();
    if (A.size() != m)
        throw DimensionError("LP: A has " + std::to_string(A.size()) + " rows, b has " +
                             std::to_string(m));
    for (std::size_t i = 0; i < m; ++i)
        if (A[i].size() != n)
            throw DimensionError("LP: row " + std::to_string(i) + " has " +
                                 std::to_string(A[i].size()) + " entries, c has " +
                                 std::to_string(n));
    auto finite = [](double v) { return std::isfinite(v); };
    for (double v : c)
        if (!finite(v)) throw DomainError("LP: non-finite objective coefficient");
    for (double v : b)
        if (!finite(v)) throw DomainError("LP: non-finite right-hand side");
    for (const auto& row : A)
        for (double v : row)
            if (!finite(v)) throw DomainError("LP: non-finite constraint coefficient");
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

namespace {

// Tableau over columns [x_0..x_{n-1} | s_0..s_{m-1} | artificials | rhs].
// Row layout: m constraint rows, then the phase-2 and phase-1 reduced-cost
// rows. Objective rows keep -z in their rhs cell.
class Tableau {
  public:
    Tableau(const LpProblem& p, double tol) : tol_(tol), n_(p.num_vars()), m_(p.num_constraints()) {
        // Rows with b > 0 keep their orientation and get an artificial basic
        // variable; rows with b <= 0 are negated so the surplus column enters
        // the basis directly with a nonnegative rhs.
        std::vector<int> art_of_row(m_, -1);
        std::size_t n_art = 0;
        for (std::size_t i = 0; i < m_; ++i)
            if (p.b[i] > 0.0) art_of_row[i] = static_cast<int>(n_art++);

        cols_ = n_ + m_ + n_art + 1;
        art_begin_ = n_ + m_;
        rows_.assign(m_ + 2, std::vector<double>(cols_, 0.0));
        basis_.resize(m_);

        for (std::size_t i = 0; i < m_; ++i) {
            auto& row = rows_[i];
            const double sign = (p.b[i] > 0.0) ? 1.0 : -1.0;
            for (std::size_t j = 0; j < n_; ++j) row[j] = sign * p.A[i][j];
            row[n_ + i] = -sign;  // surplus
            row[cols_ - 1] = sign * p.b[i];
            if (art_of_row[i] >= 0) {
                row[art_begin_ + art_of_row[i]] = 1.0;
                basis_[i] = static_cast<int>(art_begin_) + art_of_row[i];
            } else {
                basis_[i] = static_cast<int>(n_ + i);
            }
        }

        // Phase-2 reduced costs: the initial basis has zero real cost.
        for (std::size_t j = 0; j < n_; ++j) rows_[m_][j] = p.c[j];

        // Phase-1 reduced costs: cost 1 on artificials, already priced out
        // against the artificial-basic rows.
        auto& p1 = rows_[m_ + 1];
        for (std::size_t k = 0; k < n_art; ++k) p1[art_begin_ + k] = 1.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (art_of_row[i] >= 0)
                for (std::size_t j = 0; j < cols_; ++j) p1[j] -= rows_[i][j];
    }

    // Runs the given phase to optimality. Returns false on an unbounded ray.
    bool iterate(std::size_t obj_row, int& iterations) {
        const long cap = 50000 + 200 * static_cast<long>(n_ + m_);
        // Pivot elements this small would wreck the tableau's conditioning;
        // the floor sits well under tol_ so it never masks a real ratio test.
        const double piv_floor = std::min(1e-11, tol_);
        for (;;) {
            // Bland: entering = smallest structural-or-surplus column with a
            // negative reduced cost; artificials never re-enter. The leaving
            // row is the min-ratio row, ties by smallest basic variable.
            std::size_t enter = cols_;
            std::size_t leave = m_;
            for (std::size_t j = 0; j < art_begin_ && enter == cols_; ++j) {
                if (rows_[obj_row][j] >= -tol_) continue;
                bool any_positive = false;
                std::size_t best_row = m_;
                double best_ratio = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < m_; ++i) {
                    const double a = rows_[i][j];
                    if (a > 0.0) any_positive = true;
                    if (a <= piv_floor) continue;
                    const double ratio = rows_[i][cols_ - 1] / a;
                    if (best_row == m_ || ratio < best_ratio ||
                        (ratio == best_ratio && basis_[i] < basis_[best_row])) {
                        best_ratio = ratio;
                        best_row = i;
                    }
                }
                if (best_row < m_) {
                    enter = j;
                    leave = best_row;
                } else if (!any_positive) {
                    // A genuine ray: x_j can grow forever without any basic
                    // variable blocking it.
                    return false;
                }
                // Otherwise every positive entry sits below the pivot floor;
                // the column is numerically unusable, try the next candidate.
            }
            if (enter == cols_) return true;

            pivot(leave, enter);
            if (++iterations > cap)
                throw InternalError("simplex exceeded its pivot cap; tolerance too tight?");
        }
    }

    void pivot(std::size_t r, std::size_t s) {
        auto& prow = rows_[r];
        const double inv = 1.0 / prow[s];
        for (double& v : prow) v *= inv;
        prow[s] = 1.0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r) continue;
            auto& row = rows_[i];
            const double f = row[s];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
            row[s] = 0.0;
        }
        basis_[r] = static_cast<int>(s);
    }

    double phase1_value() const { return -rows_[m_ + 1][cols_ - 1]; }

    // Pivots artificial variables out of the basis where possible and drops
    // redundant rows where not.
    void remove_artificials(int& iterations) {
        for (std::size_t i = 0; i < m_;) {
            if (basis_[i] < static_cast<int>(art_begin_)) {
                ++i;
                continue;
            }
            std::size_t col = cols_;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (std::fabs(rows_[i][j]) > tol_) {
                    col = j;
                    break;
                }
            }
            if (col < cols_) {
                pivot(i, col);
                ++iterations;
                ++i;
            } else {
                rows_.erase(rows_.begin() + i);
                basis_.erase(basis_.begin() + i);
                --m_;
            }
        }
    }

    std::vector<double> extract_x() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < static_cast<int>(n_)) x[basis_[i]] = rows_[i][cols_ - 1];
        return x;
    }

    std::size_t num_rows() const { return m_; }

  private:
    double tol_;
    std::size_t n_, m_, cols_, art_begin_;
    std::vector<std::vector<double>> rows_;
    std::vector<int> basis_;
};

}  // namespace

LpSolution solve(const LpProblem& p, double tol) {
    p.validate();
    if (!(tol > 0.0) || tol > 1e-3) throw DomainError("LP: tol must lie in (0, 1e-3]");

    // Row equilibration: dividing a constraint by its largest coefficient
    // leaves the feasible set and the solution untouched but keeps the
    // tableau near unit scale (demands arrive at bit scale, 1e6 and up).
    LpProblem scaled = p;
    for (std::size_t i = 0; i < scaled.A.size(); ++i) {
        double rowmax = 0.0;
        for (double a : scaled.A[i]) rowmax = std::max(rowmax, std::fabs(a));
        if (rowmax > 0.0) {
            for (double& a : scaled.A[i]) a /= rowmax;
            scaled.b[i] /= rowmax;
        }
    }

    LpSolution sol;
    Tableau tab(scaled, tol);

    if (!tab.iterate(scaled.num_constraints() + 1, sol.iterations))
        throw InternalError("phase-1 simplex reported an unbounded ray");

    double bscale = 0.0;
    for (double v : scaled.b) bscale = std::max(bscale, std::fabs(v));
    if (tab.phase1_value() > tol * (1.0 + bscale)) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }
    tab.remove_artificials(sol.iterations);

    if (!tab.iterate(tab.num_rows(), sol.iterations)) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x = tab.extract_x();
    double obj = 0.0;
    for (std::size_t j = 0; j < p.num_vars(); ++j) obj += p.c[j] * sol.x[j];
    sol.objective = obj;
    return sol;
}

bool check_feasible(const LpProblem& p, const std::vector<double>& x, double tol) {
    p.validate();
    if (x.size() != p.num_vars())
        throw DimensionError("check_feasible: x has " + std::to_string(x.size()) +
                             " entries, expected " + std::to_string(p.num_vars()));
    for (double v : x)
        if (v < -tol) return false;
    for (std::size_t i = 0; i < p.num_constraints(); ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < p.num_vars(); ++j) lhs += p.A[i][j] * x[j];
        if (lhs < p.b[i] - tol * (1.0 + std::fabs(p.b[i]))) return false;
    }
    return true;
}

}  // namespace mia
