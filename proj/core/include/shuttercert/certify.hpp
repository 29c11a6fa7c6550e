#pragma once

#include <cstdint>
#include <vector>

#include "shuttercert/model.hpp"

namespace shuttercert {

// Guessing-probability bound for a simple source:
//   g* = 1 - (alpha - beta) * (1 - g) / p,   g = max(p, 1-p),
// valid on 0 <= beta <= alpha <= p + beta(1-p) after orientation
// normalization. With clamp set, an infeasible point is projected onto the
// polytope by shrinking alpha (never increases certified entropy); without
// it, InfeasibleStats is thrown.
CertificationResult certify_simple(const SimpleSource& source, double alpha, double beta,
                                   bool clamp = false);

// Bound for a mixture with fully known weights. Writing S+ for the
// components with p > 1/2 and d = alpha - beta (normalized):
//   if sum_{S+} gamma_i p_i <= d:
//       g* = 1 - d + sum_{S+} gamma_i (2 p_i - 1)
//   else with N the largest index such that sum_{i=N}^{N+} gamma_i p_i >= d:
//       g* = 1 - d (1 - p_N)/p_N + sum_{i=N+1}^{N+} gamma_i (p_i/p_N - 1)
CertificationResult certify_known_distribution(const MixedSource& source, double alpha,
                                               double beta, bool clamp = false);

// Default candidate guard for the mean-constraint search; the three-point
// weights blow up with N, so feasibility past this bound is a bug.
std::size_t mean_constraint_guard(double mu);

// Bound for a source known only through its mean photon number. The
// generic optimum is the three-point mixture {0, N, N+1} with
//   gamma_N   = [(N+1) d - (1 - pi^{N+1}) mu] / [(N+1)(1 - pi^N) - N (1 - pi^{N+1})]
//   gamma_N+1 = (mu - N gamma_N) / (N+1)
//   gamma_0   = 1 - gamma_N - gamma_N+1
// maximized over the (finitely many) N making all three proper weights,
// with two-point supports {0,N} and {N,N+1} as boundary fallbacks. Those
// candidates do not cover every regime (when the positive-half mass of the
// optimal mixture stays below alpha - beta, its upper support pair need
// not be consecutive), so the result is completed by an exact solve of the
// equivalent four-row linear program over gamma_i * lambda_{i,s}; the
// returned bound is the maximum of the two routes.
CertificationResult certify_mean_constraint(const MeanConstrainedSource& source, double alpha,
                                            double beta, std::size_t n_max_guard = 0,
                                            bool clamp = false);

// Photon numbers that admit the three-point solution above (diagnostic; the
// experimental regime typically admits exactly one).
std::vector<std::size_t> mean_constraint_feasible_candidates(double mu, double pi,
                                                             double alpha_minus_beta,
                                                             std::size_t n_max_guard);

// Beam-splitter law: an n-photon pulse passes a shutter-open round with
// probability 1 - pi^n.
double photon_signal_probability(double pi, std::uint64_t n);

// Truncated Poisson photon-number mixture. The residual tail mass beyond
// the truncation point is folded into one p = 1 component, which can only
// help the adversary, so the truncation never over-certifies.
MixedSource poisson_mixture(double mu, double pi, double tail_epsilon = 1e-12);

// Dispatch on the assumption tag. alpha/beta are the adjusted estimates.
CertificationResult certify_with(Assumption assumption, const SourceModel& model, double alpha,
                                 double beta, bool clamp = false);

}  // namespace shuttercert
