#include "shuttercert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "shuttercert/certify.hpp"

namespace shuttercert {

ObservedStats estimate_stats(std::int64_t n_alpha, std::int64_t t_alpha, std::int64_t n_beta,
                             std::int64_t t_beta, double epsilon) {
    if (n_alpha < 1 || n_beta < 1) throw std::invalid_argument("need at least one test round per side");
    if (t_alpha < 0 || t_alpha > n_alpha || t_beta < 0 || t_beta > n_beta) {
        throw std::invalid_argument("click counts must lie in [0, n]");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");

    const double log_term = std::log(1.0 / epsilon);
    const double adj_a = std::sqrt(log_term / (2.0 * static_cast<double>(n_alpha)));
    const double adj_b = std::sqrt(log_term / (2.0 * static_cast<double>(n_beta)));

    ObservedStats s;
    s.n_alpha = n_alpha;
    s.t_alpha = t_alpha;
    s.n_beta = n_beta;
    s.t_beta = t_beta;
    s.epsilon = epsilon;
    s.alpha_hat = std::clamp(static_cast<double>(t_alpha) / n_alpha - adj_a, 0.0, 1.0);
    s.beta_hat = std::clamp(static_cast<double>(t_beta) / n_beta + adj_b, 0.0, 1.0);
    s.joint_confidence = (1.0 - epsilon) * (1.0 - epsilon);
    return s;
}

TestAllocation optimize_test_allocation(std::size_t batch_size, double prior_alpha,
                                        double prior_beta, double epsilon,
                                        Assumption assumption, const SourceModel& model) {
    if (batch_size < 100) throw std::invalid_argument("batch_size must be >= 100");
    check_probability(prior_alpha, "prior_alpha");
    check_probability(prior_beta, "prior_beta");

    std::vector<std::size_t> grid;
    for (int k = 2;; ++k) {
        const auto n = static_cast<std::size_t>(
            std::ceil(static_cast<double>(batch_size) * std::pow(2.0, -k)));
        if (n < 1) break;
        grid.push_back(n);
        if (n == 1) break;
    }

    TestAllocation best{grid.front(), grid.front(), -1.0};
    for (std::size_t n : grid) {
        // Expected counts under the priors, rounded to the nearest integers.
        const auto ta = static_cast<std::int64_t>(std::llround(prior_alpha * n));
        const auto tb = static_cast<std::int64_t>(std::llround(prior_beta * n));
        const ObservedStats s = estimate_stats(n, ta, n, tb, epsilon);
        double h = 0.0;
        if (s.alpha_hat > s.beta_hat) {
            try {
                h = certify_with(assumption, model, s.alpha_hat, s.beta_hat).per_bit_entropy;
            } catch (const InfeasibleStats&) {
                h = 0.0;
            }
        }
        const double objective = h * static_cast<double>(batch_size - 2 * n);
        // Strict improvement required, so equal objectives keep the later
        // (smaller) grid point: ties break toward fewer test rounds.
        if (objective > best.objective || (objective == best.objective && n < best.n_alpha)) {
            best = {n, n, objective};
        }
    }
    best.objective = std::max(0.0, best.objective);
    return best;
}

}  // namespace shuttercert
