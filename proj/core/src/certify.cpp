#include "shuttercert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "shuttercert/simplex.hpp"

namespace shuttercert {

namespace {

// Slack used when comparing tail sums against alpha - beta; shifts the
// threshold index only at measure-zero boundaries.
constexpr double kBranchSlack = 1e-12;

double clamp_alpha(double alpha, double beta, double p) {
    // Conservative projection: shrink alpha - beta until the point enters
    // the polytope. Never increases certified entropy.
    return std::min(alpha, p + beta * (1.0 - p));
}

double known_distribution_g_star(const MixedSource& source, double d) {
    const auto& comps = source.components();
    const std::size_t pos = source.positive_begin();

    double positive_mass = 0.0;  // sum_{S+} gamma_i p_i
    for (std::size_t i = pos; i < comps.size(); ++i) {
        positive_mass += comps[i].gamma * comps[i].p;
    }

    if (positive_mass <= d + kBranchSlack) {
        double bonus = 0.0;
        for (std::size_t i = pos; i < comps.size(); ++i) {
            bonus += comps[i].gamma * (2.0 * comps[i].p - 1.0);
        }
        return 1.0 - d + bonus;
    }

    // Largest N with sum_{i=N}^{N+} gamma_i p_i >= d: scan the positive
    // partition from the top down until the tail covers d.
    double tail = 0.0;
    std::size_t n_index = comps.size();
    for (std::size_t i = comps.size(); i-- > pos;) {
        tail += comps[i].gamma * comps[i].p;
        if (tail >= d - kBranchSlack) {
            n_index = i;
            break;
        }
    }
    if (n_index == comps.size()) {
        // Unreachable: the full positive mass exceeds d by the branch test.
        throw std::logic_error("known-distribution threshold scan failed");
    }
    const double p_n = comps[n_index].p;
    double above = 0.0;
    for (std::size_t i = n_index + 1; i < comps.size(); ++i) {
        above += comps[i].gamma * (comps[i].p / p_n - 1.0);
    }
    return 1.0 - d * (1.0 - p_n) / p_n + above;
}

}  // namespace

CertificationResult certify_simple(const SimpleSource& source, double alpha, double beta,
                                   bool clamp) {
    const OrientedStats s = normalize_orientation(alpha, beta);
    const double p = source.p;

    if (p == 0.0 || p == 1.0) {
        // Vacuous bound; with p = 0 the polytope collapses onto the
        // diagonal, so anything off it is unexplainable.
        if (p == 0.0 && s.alpha != s.beta && !clamp) {
            throw InfeasibleStats("stats off the diagonal but p = 0");
        }
        return make_result(Assumption::Simple, 1.0, true, /*degenerate=*/true);
    }

    double a = s.alpha;
    if (!feasible(alpha, beta, p)) {
        if (!clamp) throw InfeasibleStats("stats outside the strategy polytope");
        a = clamp_alpha(s.alpha, s.beta, p);
    }
    const double g = source.guess_bound();
    const double g_star = 1.0 - (a - s.beta) * (1.0 - g) / p;
    return make_result(Assumption::Simple, g_star, true);
}

CertificationResult certify_known_distribution(const MixedSource& source, double alpha,
                                               double beta, bool clamp) {
    const OrientedStats s = normalize_orientation(alpha, beta);

    double a = s.alpha;
    const double bound = max_alpha_given_beta(source, s.beta);
    if (!(s.beta <= a && a <= bound)) {
        if (!clamp) throw InfeasibleStats("stats outside the mixture polytope");
        a = std::min(a, bound);
    }
    const double g_star = known_distribution_g_star(source, a - s.beta);
    return make_result(Assumption::KnownDistribution, g_star, true);
}

std::size_t mean_constraint_guard(double mu) {
    return 10 * static_cast<std::size_t>(std::ceil(std::max(0.0, mu))) + 64;
}

namespace {

struct MeanCandidate {
    std::vector<MixedComponent> components;
};

struct ThreePointWeights {
    double g0, gn, gn1;
    bool feasible;
};

ThreePointWeights three_point_weights(double mu, double pi, double d, std::size_t n) {
    const double pin = std::pow(pi, static_cast<double>(n));
    const double pin1 = pin * pi;
    const double den = (n + 1.0) * (1.0 - pin) - n * (1.0 - pin1);
    ThreePointWeights w{0.0, 0.0, 0.0, false};
    if (den <= 0.0) return w;
    w.gn = ((n + 1.0) * d - (1.0 - pin1) * mu) / den;
    w.gn1 = (mu - static_cast<double>(n) * w.gn) / (n + 1.0);
    w.g0 = 1.0 - w.gn - w.gn1;
    const double lo = -kSumTolerance, hi = 1.0 + kSumTolerance;
    w.feasible = w.gn >= lo && w.gn <= hi && w.gn1 >= lo && w.gn1 <= hi && w.g0 >= lo &&
                 w.g0 <= hi;
    return w;
}

// The full mean-constraint problem restated over z_{i,s} = gamma_i
// lambda_{i,s}: one normalization row, one mean row, the two observation
// rows. Solving it exactly matters because the three-point formula family
// misses optima whose positive-half mass stays below alpha - beta (where
// the optimal upper support pair need not be consecutive, e.g. {0,1,3}).
std::optional<double> mean_constraint_exact(double mu, double pi, double alpha, double beta,
                                            std::size_t cap) {
    const std::size_t k = cap + 1;
    DenseLp lp;
    lp.rows = 4;
    lp.cols = 4 * k;
    lp.a.assign(lp.rows * lp.cols, 0.0);
    lp.b = {1.0, mu, alpha, beta};
    lp.c.assign(lp.cols, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double p = photon_signal_probability(pi, i);
        const double g = std::max(p, 1.0 - p);
        const double obs_a[4] = {0.0, 1.0, p, 1.0 - p};
        const double obs_b[4] = {0.0, 1.0, 0.0, 1.0};
        const double guess[4] = {1.0, 1.0, g, g};
        for (std::size_t s = 0; s < 4; ++s) {
            const std::size_t col = 4 * i + s;
            lp.at(0, col) = 1.0;
            lp.at(1, col) = static_cast<double>(i);
            lp.at(2, col) = obs_a[s];
            lp.at(3, col) = obs_b[s];
            lp.c[col] = guess[s];
        }
    }
    const LpSolution sol = simplex_maximize(lp);
    if (sol.status != LpStatus::Optimal) return std::nullopt;
    return sol.value;
}

void push_candidate(std::vector<MeanCandidate>& out, std::vector<MixedComponent> comps) {
    // Drop zero-weight points and repair rounding dust so the weights form
    // an exact distribution again.
    std::vector<MixedComponent> kept;
    double total = 0.0;
    for (auto& c : comps) {
        if (c.gamma > 1e-15) {
            kept.push_back(c);
            total += c.gamma;
        }
    }
    if (kept.empty() || total <= 0.0) return;
    for (auto& c : kept) c.gamma /= total;
    out.push_back(MeanCandidate{std::move(kept)});
}

}  // namespace

std::vector<std::size_t> mean_constraint_feasible_candidates(double mu, double pi,
                                                             double alpha_minus_beta,
                                                             std::size_t n_max_guard) {
    std::vector<std::size_t> out;
    for (std::size_t n = 1; n <= n_max_guard; ++n) {
        if (three_point_weights(mu, pi, alpha_minus_beta, n).feasible) out.push_back(n);
    }
    return out;
}

CertificationResult certify_mean_constraint(const MeanConstrainedSource& source, double alpha,
                                            double beta, std::size_t n_max_guard, bool clamp) {
    const double mu = source.mu;
    const double pi = source.pi;
    const std::size_t guard = n_max_guard ? n_max_guard : mean_constraint_guard(mu);
    const OrientedStats s = normalize_orientation(alpha, beta);

    double a = s.alpha;
    if (clamp) {
        // No valid mixture exceeds the chord aggregate signal probability at
        // {floor(mu), ceil(mu)} (concavity of 1 - pi^i), and routing the
        // closed-shutter mass can raise alpha by at most beta on top.
        const double lo = std::floor(mu), hi = std::ceil(mu);
        double p_max;
        if (hi == lo) {
            p_max = photon_signal_probability(pi, static_cast<std::uint64_t>(lo));
        } else {
            p_max = (hi - mu) * photon_signal_probability(pi, static_cast<std::uint64_t>(lo)) +
                    (mu - lo) * photon_signal_probability(pi, static_cast<std::uint64_t>(hi));
        }
        a = std::min(a, std::min(1.0, p_max + s.beta));
    }
    const double d = a - s.beta;
    if (d <= 0.0) {
        // Diagonal stats certify nothing; every mean-mu mixture explains them.
        return make_result(Assumption::MeanConstraint, 1.0, true);
    }

    std::vector<MeanCandidate> candidates;

    // Interior three-point solutions.
    bool feasible_at_guard = false;
    for (std::size_t n = 1; n <= guard; ++n) {
        const ThreePointWeights w = three_point_weights(mu, pi, d, n);
        if (!w.feasible) continue;
        if (n == guard) feasible_at_guard = true;
        push_candidate(candidates,
                       {{std::max(0.0, w.g0), 0.0},
                        {std::max(0.0, w.gn), photon_signal_probability(pi, n)},
                        {std::max(0.0, w.gn1), photon_signal_probability(pi, n + 1)}});
    }
    if (feasible_at_guard) {
        throw GuardExceeded("three-point weights still feasible at the candidate guard");
    }

    // Boundary supports pinned by the normalization and mean constraints.
    for (std::size_t n = 1; n <= guard; ++n) {
        const double gn = mu / static_cast<double>(n);
        if (gn <= 1.0 + kSumTolerance) {
            push_candidate(candidates, {{1.0 - std::min(1.0, gn), 0.0},
                                        {std::min(1.0, gn), photon_signal_probability(pi, n)}});
        }
    }
    const double fl = std::floor(mu);
    if (mu > fl) {
        const auto n = static_cast<std::size_t>(fl);
        push_candidate(candidates, {{(n + 1.0) - mu, photon_signal_probability(pi, n)},
                                    {mu - static_cast<double>(n),
                                     photon_signal_probability(pi, n + 1)}});
    } else {
        const auto n = static_cast<std::size_t>(fl);
        push_candidate(candidates, {{1.0, photon_signal_probability(pi, n)}});
    }

    std::optional<double> best;
    for (const auto& cand : candidates) {
        MixedSource mix(cand.components);
        double a_cand = a;
        if (a_cand > max_alpha_given_beta(mix, s.beta) + kBranchSlack) {
            if (!clamp) continue;
            // Conservative per-candidate projection onto the candidate's own
            // polytope boundary (shrinks alpha - beta, never the entropy gap).
            a_cand = max_alpha_given_beta(mix, s.beta);
        }
        const CertificationResult r =
            certify_known_distribution(mix, a_cand, s.beta, /*clamp=*/true);
        if (!best || r.g_star > *best) best = r.g_star;
    }
    // Optimal support indices scale like mu/d, so for small separations the
    // LP support must extend past the formula-family guard. Past the hard
    // cap the residual undershoot is below d <= mu / 2^17, i.e. negligible.
    const std::size_t lp_cap = std::max<std::size_t>(
        guard, std::min<std::size_t>(std::size_t{1} << 17,
                                     static_cast<std::size_t>(std::ceil(2.0 * mu / d)) + 2));
    if (const auto exact = mean_constraint_exact(mu, pi, a, s.beta, lp_cap)) {
        if (!best || *exact > *best) best = *exact;
    }
    if (!best) throw InfeasibleStats("stats unexplainable by any mean-constrained mixture");
    return make_result(Assumption::MeanConstraint, *best, true);
}

double photon_signal_probability(double pi, std::uint64_t n) {
    check_probability(pi, "pi");
    if (n == 0) return 0.0;
    return 1.0 - std::pow(pi, static_cast<double>(n));
}

MixedSource poisson_mixture(double mu, double pi, double tail_epsilon) {
    if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
    if (!(tail_epsilon > 0.0)) throw std::invalid_argument("tail_epsilon must be > 0");
    check_probability(pi, "pi");

    std::vector<MixedComponent> comps;
    double term = std::exp(-mu);  // gamma_0
    double cumulative = 0.0;
    std::uint64_t i = 0;
    while (true) {
        comps.push_back({term, photon_signal_probability(pi, i)});
        cumulative += term;
        if (1.0 - cumulative < tail_epsilon) break;
        ++i;
        term *= mu / static_cast<double>(i);
        if (i > 1000000) throw std::logic_error("poisson truncation did not converge");
    }
    const double tail = 1.0 - cumulative;
    if (tail > 0.0) {
        comps.push_back({tail, 1.0});  // adversary-favorable folding
    } else if (tail < 0.0) {
        comps.back().gamma += tail;  // rounding dust
    }
    return MixedSource(std::move(comps));
}

CertificationResult certify_with(Assumption assumption, const SourceModel& model, double alpha,
                                 double beta, bool clamp) {
    switch (assumption) {
        case Assumption::Simple:
            return certify_simple(std::get<SimpleSource>(model), alpha, beta, clamp);
        case Assumption::KnownDistribution:
            return certify_known_distribution(std::get<MixedSource>(model), alpha, beta, clamp);
        case Assumption::MeanConstraint:
            return certify_mean_constraint(std::get<MeanConstrainedSource>(model), alpha, beta, 0,
                                           clamp);
    }
    throw std::logic_error("unknown assumption");
}

}  // namespace shuttercert
