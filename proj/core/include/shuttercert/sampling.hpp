#pragma once

#include <cstdint>

#include "shuttercert/model.hpp"

namespace shuttercert {

// Chernoff-Hoeffding one-sided estimators:
//   alpha_hat = t_a/n_a - sqrt(ln(1/eps) / (2 n_a))
//   beta_hat  = t_b/n_b + sqrt(ln(1/eps) / (2 n_b))
// clamped into [0,1]; each side holds with confidence 1 - eps, jointly
// (1 - eps)^2.
ObservedStats estimate_stats(std::int64_t n_alpha, std::int64_t t_alpha, std::int64_t n_beta,
                             std::int64_t t_beta, double epsilon);

struct TestAllocation {
    std::size_t n_alpha = 0;
    std::size_t n_beta = 0;
    double objective = 0.0;  // expected certified bits per batch
};

// Picks n_alpha = n_beta from the geometric grid {ceil(N 2^-k), k >= 2},
// maximizing H_min(alpha_hat, beta_hat) * (N - n_alpha - n_beta) under the
// given prior click rates. Ties break toward fewer test rounds. The equal
// split keeps the search one-dimensional and matches equal expected test
// counts per shutter setting.
TestAllocation optimize_test_allocation(std::size_t batch_size, double prior_alpha,
                                        double prior_beta, double epsilon,
                                        Assumption assumption, const SourceModel& model);

}  // namespace shuttercert
