#include "shuttercert/oracle_check.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "shuttercert/certify.hpp"
#include "shuttercert/lp_oracle.hpp"

namespace shuttercert {

OracleScope parse_oracle_scope(const std::string& name) {
    if (name == "simple") return OracleScope::Simple;
    if (name == "mixed") return OracleScope::Mixed;
    if (name == "mean") return OracleScope::Mean;
    if (name == "photon") return OracleScope::Photon;
    throw std::invalid_argument("unknown oracle scope: " + name);
}

std::string to_string(OracleScope scope) {
    switch (scope) {
        case OracleScope::Simple: return "simple";
        case OracleScope::Mixed: return "mixed";
        case OracleScope::Mean: return "mean";
        case OracleScope::Photon: return "photon";
    }
    return "?";
}

std::string OracleReport::to_json() const {
    nlohmann::json j;
    j["scope"] = shuttercert::to_string(scope);
    j["instances"] = instances;
    j["deltas"] = deltas;
    j["max_delta"] = max_delta;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    j["seconds"] = seconds;
    return j.dump(2);
}

namespace {

// Feasible (alpha, beta) for a polytope with aggregate signal probability
// p_bar, drawn interior to keep tolerance games out of the comparison.
void draw_stats(Rng& rng, double p_bar, bool allow_flip, double& alpha, double& beta) {
    beta = rng.uniform(0.0, 0.85);
    const double span = p_bar * (1.0 - beta);
    alpha = beta + rng.uniform(0.02, 0.98) * span;
    if (allow_flip && rng.bernoulli(0.5)) {
        alpha = 1.0 - alpha;
        beta = 1.0 - beta;
    }
}

}  // namespace

SimpleInstance random_simple_instance(Rng& rng, bool allow_flip) {
    SimpleInstance in{};
    in.p = rng.uniform(0.02, 0.98);
    draw_stats(rng, in.p, allow_flip, in.alpha, in.beta);
    return in;
}

MixedInstance random_mixed_instance(Rng& rng, std::size_t max_components, bool allow_flip) {
    const std::size_t k = 1 + rng.below(max_components);
    std::vector<MixedComponent> comps(k);
    double total = 0.0;
    for (auto& c : comps) {
        c.gamma = 0.05 + rng.uniform();  // keep weights well away from zero
        c.p = rng.uniform(0.0, 1.0);
        total += c.gamma;
    }
    for (auto& c : comps) c.gamma /= total;
    // Repair rounding dust so the weights sum to one exactly enough.
    double sum = 0.0;
    for (const auto& c : comps) sum += c.gamma;
    comps.back().gamma += 1.0 - sum;

    MixedSource source(std::move(comps));
    // Sample the full mixture polytope, including the region above the
    // aggregate chord that only per-component routing can reach.
    double beta = rng.uniform(0.0, 0.85);
    const double bound = max_alpha_given_beta(source, beta);
    double alpha = beta + rng.uniform(0.02, 0.98) * (bound - beta);
    if (allow_flip && rng.bernoulli(0.5)) {
        alpha = 1.0 - alpha;
        beta = 1.0 - beta;
    }
    return MixedInstance{std::move(source), alpha, beta};
}

MeanInstance random_mean_instance(Rng& rng) {
    for (int tries = 0; tries < 1000; ++tries) {
        MeanInstance in{};
        in.mu = rng.uniform(0.1, 3.0);
        in.pi = rng.uniform(0.1, 0.7);
        const double beta_max = 0.2;
        in.beta = rng.uniform(0.0, beta_max);
        // Largest aggregate signal probability over valid mixtures: the
        // chord of 1 - pi^i at {floor(mu), ceil(mu)}.
        const double lo = std::floor(in.mu), hi = std::ceil(in.mu);
        const double p_lo = 1.0 - std::pow(in.pi, lo);
        const double p_hi = 1.0 - std::pow(in.pi, hi);
        const double p_max = hi == lo ? p_lo : (hi - in.mu) * p_lo + (in.mu - lo) * p_hi;
        const double d_hi = 0.9 * p_max * (1.0 - in.beta);
        // Keep the optimal support index near mu/d and inside the oracle's
        // truncation.
        const double d_lo = std::max(0.08, in.mu / 9.0 + 0.02);
        if (d_lo >= d_hi) continue;
        in.alpha = in.beta + rng.uniform(d_lo, d_hi);
        return in;
    }
    throw std::logic_error("mean instance sampler failed to find a feasible window");
}

PhotonInstance random_photon_instance(Rng& rng, int index) {
    PhotonInstance in{};
    in.n = 1 + (index % 10);
    // Keep pi^n above the solver tolerances; below ~1e-5 the subset
    // strategies collapse onto each other in double arithmetic and the
    // comparison only measures pivot noise.
    const double lo = std::max(0.05, std::pow(1e-5, 1.0 / in.n));
    in.pi = rng.uniform(lo, 0.95);
    const double p = 1.0 - std::pow(in.pi, in.n);
    draw_stats(rng, p, /*allow_flip=*/false, in.alpha, in.beta);
    return in;
}

OracleReport run_oracle_check(OracleScope scope, int instances, std::uint64_t seed) {
    if (instances < 1) throw std::invalid_argument("instances must be >= 1");
    OracleReport report;
    report.scope = scope;
    report.instances = instances;
    Rng rng(seed);

    const auto start = std::chrono::steady_clock::now();
    report.deltas.reserve(instances);
    double max_delta = 0.0;
    for (int i = 0; i < instances; ++i) {
        double closed = 0.0, oracle = 0.0;
        switch (scope) {
            case OracleScope::Simple: {
                const SimpleInstance in = random_simple_instance(rng);
                closed = certify_simple(SimpleSource(in.p), in.alpha, in.beta).g_star;
                oracle = solve_simple_lp(in.p, in.alpha, in.beta, /*include_not_h=*/true).g_star;
                report.tolerance = kSimpleOracleTol;
                break;
            }
            case OracleScope::Mixed: {
                const MixedInstance in = random_mixed_instance(rng);
                closed = certify_known_distribution(in.source, in.alpha, in.beta).g_star;
                oracle = solve_mixed_lp(in.source, in.alpha, in.beta, /*include_not_h=*/true).g_star;
                report.tolerance = kMixedOracleTol;
                break;
            }
            case OracleScope::Mean: {
                const MeanInstance in = random_mean_instance(rng);
                closed = certify_mean_constraint(MeanConstrainedSource(in.mu, in.pi), in.alpha,
                                                 in.beta)
                             .g_star;
                oracle = solve_mean_constraint_bruteforce(in.mu, in.pi, in.alpha, in.beta,
                                                          kMeanOracleSupportMax, kMeanOracleGrid);
                report.tolerance = kMeanOracleTol;
                break;
            }
            case OracleScope::Photon: {
                const PhotonInstance in = random_photon_instance(rng, i);
                const double p = 1.0 - std::pow(in.pi, in.n);
                closed = bruteforce_response_functions(in.n, in.pi, in.alpha, in.beta);
                oracle = solve_simple_lp(p, in.alpha, in.beta, /*include_not_h=*/true).g_star;
                report.tolerance = kPhotonOracleTol;
                break;
            }
        }
        report.deltas.push_back(std::abs(closed - oracle));
        max_delta = std::max(max_delta, report.deltas.back());
    }
    const auto stop = std::chrono::steady_clock::now();

    report.max_delta = max_delta;
    report.pass = max_delta <= report.tolerance;
    report.seconds = std::chrono::duration<double>(stop - start).count();
    return report;
}

}  // namespace shuttercert
