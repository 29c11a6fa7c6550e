#pragma once

#include <cstdint>
#include <vector>

#include "shuttercert/model.hpp"

namespace shuttercert {

// Independent verification of the closed-form bounds. Everything here
// solves the optimization problems directly (vertex enumeration or dense
// simplex) and must not share code paths with the certifiers it checks.

struct SimpleLpResult {
    double g_star = 1.0;
    StrategyMix witness;
};

// Maximizes lambda_N + lambda_Y + g (lambda_H [+ lambda_notH]) subject to
// the strategy mixture reproducing (alpha, beta); solved by exact vertex
// enumeration of the <= 4-variable polytope. The dishonest column has
// observable (1-p, 1).
SimpleLpResult solve_simple_lp(double p, double alpha, double beta, bool include_not_h);

struct MixedLpResult {
    double g_star = 1.0;
    std::vector<StrategyMix> witness;  // per component
};

// Per-component strategy LP for a known mixture, solved with a dense
// simplex. Limited to 64 components.
MixedLpResult solve_mixed_lp(const MixedSource& source, double alpha, double beta,
                             bool include_not_h);

// Lower-bound oracle for the mean-constraint bound: searches distributions
// on {0..support_max} satisfying the normalization and mean equalities
// (supports of size <= 3; one free weight gridded, the other two solved
// exactly), scoring each with solve_mixed_lp. The discretization slack is
// O(grid) with constant <= 2*(support_max + 1).
double solve_mean_constraint_bruteforce(double mu, double pi, double alpha, double beta,
                                        int support_max, double grid);

// Enumerates all 2^(n+1) click-subset response functions of an n-photon
// event and solves the LP over their convex mixtures; must equal the
// four-strategy optimum at p = 1 - pi^n.
double bruteforce_response_functions(int n, double pi, double alpha, double beta);

}  // namespace shuttercert
