#include <doctest.h>

#include <cmath>

#include "shuttercert/certify.hpp"
#include "shuttercert/lp_oracle.hpp"
#include "shuttercert/oracle_check.hpp"
#include "shuttercert/rng.hpp"

using namespace shuttercert;

TEST_CASE("simple source: closed-form bound") {
    // Ideal beam splitter with perfect stats certifies one bit per bit.
    auto r = certify_simple(SimpleSource(0.5), 0.5, 0.0);
    CHECK(r.g_star == doctest::Approx(0.5));
    CHECK(r.per_bit_entropy == doctest::Approx(1.0));

    // Zero diagonal distance certifies nothing.
    r = certify_simple(SimpleSource(0.9), 0.3, 0.3);
    CHECK(r.g_star == doctest::Approx(1.0));
    CHECK(r.per_bit_entropy == 0.0);

    // 1 - 0.5 * (0.3 / 0.7)
    r = certify_simple(SimpleSource(0.7), 0.6, 0.1);
    CHECK(r.g_star == doctest::Approx(1.0 - 0.5 * (0.3 / 0.7)).epsilon(1e-12));
    CHECK(r.g_star == doctest::Approx(0.785714285714).epsilon(1e-9));
}

TEST_CASE("simple source: errors and degenerate parameters") {
    CHECK_THROWS_AS(certify_simple(SimpleSource(0.5), 0.8, 0.0), InfeasibleStats);
    // Clamping projects onto the polytope boundary instead.
    const auto clamped = certify_simple(SimpleSource(0.5), 0.8, 0.0, /*clamp=*/true);
    CHECK(clamped.g_star == doctest::Approx(0.5));

    const auto degenerate = certify_simple(SimpleSource(1.0), 0.7, 0.2);
    CHECK(degenerate.g_star == 1.0);
    CHECK(degenerate.degenerate);
    CHECK_THROWS_AS(certify_simple(SimpleSource(0.0), 0.3, 0.1), InfeasibleStats);
    CHECK(certify_simple(SimpleSource(0.0), 0.3, 0.3).degenerate);
}

TEST_CASE("known distribution: branch selection") {
    MixedSource src({{0.5, 0.4}, {0.5, 0.9}});
    // Positive-half mass 0.45 <= d = 0.5: every strong component plays honest.
    auto r = certify_known_distribution(src, 0.5, 0.0);
    CHECK(r.g_star == doctest::Approx(0.9).epsilon(1e-12));

    // d = 0.3 < 0.45: threshold lands on the p = 0.9 component.
    r = certify_known_distribution(src, 0.4, 0.1);
    CHECK(r.g_star == doctest::Approx(1.0 - 0.3 * (0.1 / 0.9)).epsilon(1e-12));
}

TEST_CASE("known distribution: single component reduces to the simple bound") {
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform(0.02, 0.98);
        const double beta = rng.uniform(0.0, 0.8);
        const double alpha = beta + rng.uniform() * p * (1.0 - beta);
        const double mixed = certify_known_distribution(MixedSource({{1.0, p}}), alpha, beta).g_star;
        const double simple = certify_simple(SimpleSource(p), alpha, beta).g_star;
        CHECK(std::abs(mixed - simple) <= 1e-12);
    }
    const auto r = certify_known_distribution(MixedSource({{1.0, 0.5}}), 0.5, 0.0);
    CHECK(r.g_star == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mean constraint: frozen three-point example") {
    // mu = 1, pi = 0.5, d = 0.4: only N = 1 is weight-feasible, giving the
    // mixture (0.4, 0.2, 0.4) on photon numbers {0,1,2} and g* = 0.8.
    const auto cands = mean_constraint_feasible_candidates(1.0, 0.5, 0.4, mean_constraint_guard(1.0));
    REQUIRE(cands.size() == 1);
    CHECK(cands[0] == 1);
    const auto r = certify_mean_constraint(MeanConstrainedSource(1.0, 0.5), 0.4, 0.0);
    CHECK(r.g_star == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("mean constraint: the experiment's regime has a single feasible N") {
    // mu = 1.06, pi = 0.4882, d around 0.43.
    const double mu = 1.06, pi = 0.4882;
    const auto cands = mean_constraint_feasible_candidates(mu, pi, 0.43, mean_constraint_guard(mu));
    REQUIRE(cands.size() == 1);
    CHECK(cands[0] == 1);
    // The exact route agrees with the g*_1 formula here.
    const double pi2 = pi * pi;
    const double den = 2.0 * (1.0 - pi) - (1.0 - pi2);
    const double expected = 1.0 + 0.43 - (0.43 + mu * (pi2 - pi)) / den;
    const auto r = certify_mean_constraint(MeanConstrainedSource(mu, pi), 0.43, 0.0);
    CHECK(r.g_star == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("mean constraint: guard trips when feasibility reaches it") {
    // N = 1 is weight-feasible here, so a guard of 1 signals the
    // provably-finite candidate family was cut short.
    CHECK_THROWS_AS(certify_mean_constraint(MeanConstrainedSource(1.0, 0.5), 0.4, 0.0,
                                            /*n_max_guard=*/1),
                    GuardExceeded);
    CHECK_NOTHROW(certify_mean_constraint(MeanConstrainedSource(1.0, 0.5), 0.4, 0.0,
                                          /*n_max_guard=*/8));
}

TEST_CASE("mean constraint: small separations need far support indices") {
    // pi = 0.97, d = 0.01: the only weight-feasible three-point support sits
    // at N = 94, past the default formula guard of 74; the LP support cap
    // follows mu/d and a run with the guard widened to cover N = 94 agrees.
    const MeanConstrainedSource src(1.0, 0.97);
    const auto dynamic = certify_mean_constraint(src, 0.01, 0.0);
    const auto wide = certify_mean_constraint(src, 0.01, 0.0, /*n_max_guard=*/1000);
    const auto cands = mean_constraint_feasible_candidates(1.0, 0.97, 0.01, 1000);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0] == 94);
    CHECK(std::abs(dynamic.g_star - wide.g_star) <= 1e-9);
    CHECK(dynamic.g_star == doctest::Approx(0.99945).epsilon(1e-4));
    CHECK(dynamic.g_star < 1.0);

    // With fast-saturating p_N the adversary explains a tiny separation by
    // rare huge-photon-number pulses at essentially no guessing cost.
    const auto saturated = certify_mean_constraint(MeanConstrainedSource(1.0, 0.5), 0.004, 0.0);
    CHECK(saturated.g_star == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean constraint: degenerate and infeasible inputs") {
    // No photons, no distinguishable signal.
    auto r = certify_mean_constraint(MeanConstrainedSource(0.0, 0.5), 0.3, 0.3);
    CHECK(r.g_star == 1.0);
    CHECK(r.per_bit_entropy == 0.0);
    CHECK_THROWS_AS(certify_mean_constraint(MeanConstrainedSource(0.0, 0.5), 0.4, 0.1),
                    InfeasibleStats);
    // Stats stronger than any mean-mu mixture can explain.
    CHECK_THROWS_AS(certify_mean_constraint(MeanConstrainedSource(0.1, 0.5), 0.9, 0.0),
                    InfeasibleStats);
    // Clamp mode projects instead and certifies conservatively.
    CHECK_NOTHROW(certify_mean_constraint(MeanConstrainedSource(0.1, 0.5), 0.9, 0.0, 0, true));
}

TEST_CASE("photon signal probability") {
    CHECK(photon_signal_probability(0.5, 1) == doctest::Approx(0.5));
    CHECK(photon_signal_probability(0.5, 3) == doctest::Approx(0.875));
    CHECK(photon_signal_probability(0.3, 0) == 0.0);
    CHECK(photon_signal_probability(0.9, 0) == 0.0);
}

TEST_CASE("poisson mixture construction") {
    const auto vacuum = poisson_mixture(0.0, 0.5);
    REQUIRE(vacuum.size() == 1);
    CHECK(vacuum.components()[0].gamma == doctest::Approx(1.0));
    CHECK(vacuum.components()[0].p == 0.0);

    const auto m = poisson_mixture(1.0, 0.5, 1e-12);
    // gamma_1 / gamma_0 = mu = 1 exactly.
    CHECK(m.components()[1].gamma == doctest::Approx(m.components()[0].gamma).epsilon(1e-12));
    // Trailing component is the adversary-favorable tail fold at p = 1.
    CHECK(m.components().back().p == 1.0);
    double total = 0.0;
    for (const auto& c : m.components()) total += c.gamma;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Tens of components at the experiment's mean.
    const auto exp_mix = poisson_mixture(1.06, 0.4882, 1e-12);
    CHECK(exp_mix.size() >= 10);
    CHECK(exp_mix.size() <= 40);
}

TEST_CASE("diagonal nullity across all three models") {
    CHECK(certify_simple(SimpleSource(0.7), 0.4, 0.4).g_star == 1.0);
    CHECK(certify_known_distribution(poisson_mixture(1.0, 0.5), 0.4, 0.4).g_star == 1.0);
    CHECK(certify_mean_constraint(MeanConstrainedSource(1.0, 0.5), 0.4, 0.4).g_star == 1.0);
}

TEST_CASE("monotone trust ordering and monotonicity in the diagonal distance") {
    // Consistent parameters: single photon p = 1 - pi, Poisson/mean with mu.
    const double pi = 0.5, mu = 1.5;
    const SimpleSource simple(1.0 - pi);
    const MixedSource pois = poisson_mixture(mu, pi);
    const MeanConstrainedSource mean(mu, pi);

    double last_simple = 1.1, last_pois = 1.1, last_mean = 1.1;
    for (double d : {0.05, 0.10, 0.15, 0.20, 0.25, 0.30}) {
        const double beta = 0.02;
        const double alpha = beta + d;
        const double gs = certify_simple(simple, alpha, beta).g_star;
        const double gp = certify_known_distribution(pois, alpha, beta).g_star;
        const double gm = certify_mean_constraint(mean, alpha, beta).g_star;
        // Less trust, more guessing.
        CHECK(gs <= gp + 1e-12);
        CHECK(gp <= gm + 1e-12);
        // g* is nonincreasing in d for each model.
        CHECK(gs <= last_simple + 1e-12);
        CHECK(gp <= last_pois + 1e-12);
        CHECK(gm <= last_mean + 1e-12);
        last_simple = gs;
        last_pois = gp;
        last_mean = gm;
    }
}

TEST_CASE("closed forms match the LP oracle on randomized instances") {
    auto simple = run_oracle_check(OracleScope::Simple, 150, 11);
    CHECK(simple.pass);
    CHECK(simple.max_delta <= 1e-8);
    auto mixed = run_oracle_check(OracleScope::Mixed, 150, 12);
    CHECK(mixed.pass);
    CHECK(mixed.max_delta <= 1e-8);
}
