#pragma once

#include <cstddef>
#include <vector>

namespace shuttercert {

// Dense equality-form LP:  maximize c.x  s.t.  A x = b, x >= 0.
// A is row-major, rows x cols. Sized for the oracle's tiny instances; no
// sparse handling, no dual certificates.
struct DenseLp {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;

    double& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
    double at(std::size_t r, std::size_t col) const { return a[r * cols + col]; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> x;
};

// Two-phase tableau simplex with a Bland fallback against cycling.
LpSolution simplex_maximize(const DenseLp& lp);

}  // namespace shuttercert
