#include "shuttercert/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shuttercert {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// Tableau layout: m constraint rows over (n structural + m artificial)
// columns plus RHS; one extra row of reduced costs with the negated
// objective value in its RHS cell.
class Tableau {
public:
    Tableau(const DenseLp& lp)
        : m_(lp.rows), n_(lp.cols), width_(lp.cols + lp.rows + 1),
          t_((lp.rows + 1) * (lp.cols + lp.rows + 1), 0.0), basis_(lp.rows) {
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) cell(i, j) = sign * lp.at(i, j);
            cell(i, n_ + i) = 1.0;
            rhs(i) = sign * lp.b[i];
            basis_[i] = n_ + i;
        }
    }

    double& cell(std::size_t r, std::size_t col) { return t_[r * width_ + col]; }
    double& rhs(std::size_t r) { return t_[r * width_ + width_ - 1]; }

    // Rebuild the reduced-cost row for the given objective (maximization),
    // pricing out the current basis.
    void set_objective(const std::vector<double>& c, bool allow_artificials) {
        for (std::size_t j = 0; j < width_; ++j) cell(m_, j) = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) cell(m_, j) = c[j];
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = basis_[i] < c.size() ? c[basis_[i]] : 0.0;
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) cell(m_, j) -= cb * cell(i, j);
        }
        artificials_allowed_ = allow_artificials;
    }

    // Runs simplex pivots until no improving column remains. Returns false
    // when the problem is unbounded.
    bool optimize() {
        std::size_t iters = 0;
        const std::size_t bland_after = 50 * (m_ + n_) + 200;
        const std::size_t hard_cap = 2000 * (m_ + n_) + 10000;
        while (true) {
            const std::size_t limit = artificials_allowed_ ? n_ + m_ : n_;
            std::size_t enter = width_;
            if (iters < bland_after) {
                double best = kPivotTol;
                for (std::size_t j = 0; j < limit; ++j) {
                    if (cell(m_, j) > best) {
                        best = cell(m_, j);
                        enter = j;
                    }
                }
            } else {
                for (std::size_t j = 0; j < limit; ++j) {
                    if (cell(m_, j) > kPivotTol) {
                        enter = j;
                        break;
                    }
                }
            }
            if (enter == width_) return true;  // optimal

            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (cell(i, enter) > kPivotTol) {
                    const double ratio = rhs(i) / cell(i, enter);
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (leave == m_ || basis_[i] < basis_[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m_) return false;  // unbounded direction

            pivot(leave, enter);
            if (++iters > hard_cap) throw std::runtime_error("simplex did not terminate");
        }
    }

    double objective_value() { return -cell(m_, width_ - 1); }

    std::vector<double> solution() {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) x[basis_[i]] = rhs(i);
        }
        return x;
    }

    // After phase 1, pivot still-basic artificials out where possible so
    // phase 2 cannot move them again.
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(cell(i, j)) > kPivotTol) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

private:
    void pivot(std::size_t row, std::size_t col) {
        const double pv = cell(row, col);
        for (std::size_t j = 0; j < width_; ++j) cell(row, j) /= pv;
        for (std::size_t r = 0; r <= m_; ++r) {
            if (r == row) continue;
            const double factor = cell(r, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) cell(r, j) -= factor * cell(row, j);
        }
        basis_[row] = col;
    }

    std::size_t m_, n_, width_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
    bool artificials_allowed_ = true;
};

}  // namespace

LpSolution simplex_maximize(const DenseLp& lp) {
    if (lp.a.size() != lp.rows * lp.cols || lp.b.size() != lp.rows || lp.c.size() != lp.cols) {
        throw std::invalid_argument("simplex: inconsistent LP dimensions");
    }
    Tableau t(lp);

    // Phase 1: drive the artificial basis to zero.
    std::vector<double> phase1(lp.cols + lp.rows, 0.0);
    for (std::size_t i = 0; i < lp.rows; ++i) phase1[lp.cols + i] = -1.0;
    t.set_objective(phase1, /*allow_artificials=*/true);
    if (!t.optimize()) throw std::runtime_error("simplex: phase-1 unbounded");
    if (t.objective_value() < -kFeasTol) return {LpStatus::Infeasible, 0.0, {}};
    t.expel_artificials();

    // Phase 2: the real objective over structural columns only.
    t.set_objective(lp.c, /*allow_artificials=*/false);
    if (!t.optimize()) return {LpStatus::Unbounded, 0.0, {}};
    return {LpStatus::Optimal, t.objective_value(), t.solution()};
}

}  // namespace shuttercert
