#include <doctest.h>

#include <cmath>

#include "shuttercert/certify.hpp"
#include "shuttercert/lp_oracle.hpp"
#include "shuttercert/oracle_check.hpp"
#include "shuttercert/rng.hpp"

using namespace shuttercert;

TEST_CASE("simple LP: vertex enumeration") {
    auto r = solve_simple_lp(0.5, 0.5, 0.0, true);
    CHECK(r.g_star == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.witness.honest == doctest::Approx(1.0));

    // Diagonal stats reached with the constant strategies alone.
    r = solve_simple_lp(0.5, 0.5, 0.5, true);
    CHECK(r.g_star == doctest::Approx(1.0));

    CHECK_THROWS_AS(solve_simple_lp(0.5, 0.9, 0.0, true), LpInfeasible);
}

TEST_CASE("dishonest-click column never helps when alpha >= beta") {
    const auto with = solve_simple_lp(0.7, 0.6, 0.1, true);
    const auto without = solve_simple_lp(0.7, 0.6, 0.1, false);
    CHECK(std::abs(with.g_star - without.g_star) <= 1e-10);

    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const auto in = random_simple_instance(rng, /*allow_flip=*/false);
        const double g_with = solve_simple_lp(in.p, in.alpha, in.beta, true).g_star;
        const double g_without = solve_simple_lp(in.p, in.alpha, in.beta, false).g_star;
        CHECK(g_with <= g_without + 1e-10);
    }
}

TEST_CASE("witness reproduces the observed statistics") {
    Rng rng(37);
    for (int i = 0; i < 300; ++i) {
        const auto in = random_simple_instance(rng);
        const auto r = solve_simple_lp(in.p, in.alpha, in.beta, true);
        const StrategyMix& w = r.witness;
        const double alpha = w.always + w.honest * in.p + w.dishonest * (1.0 - in.p);
        const double beta = w.always + w.dishonest;
        CHECK(std::abs(alpha - in.alpha) <= 1e-10);
        CHECK(std::abs(beta - in.beta) <= 1e-10);
        CHECK(std::abs(w.sum() - 1.0) <= 1e-10);
    }
}

TEST_CASE("mixed LP: reduction and known values") {
    const auto single = solve_mixed_lp(MixedSource({{1.0, 0.7}}), 0.6, 0.1, true);
    const auto simple = solve_simple_lp(0.7, 0.6, 0.1, true);
    CHECK(single.g_star == doctest::Approx(simple.g_star).epsilon(1e-10));

    const auto two = solve_mixed_lp(MixedSource({{0.5, 0.4}, {0.5, 0.9}}), 0.4, 0.1, true);
    CHECK(two.g_star == doctest::Approx(1.0 - 0.3 * (0.1 / 0.9)).epsilon(1e-9));
    REQUIRE(two.witness.size() == 2);

    std::vector<MixedComponent> big(65, {1.0 / 65, 0.5});
    CHECK_THROWS_AS(solve_mixed_lp(MixedSource(big), 0.3, 0.1, true), ScaleExceeded);
}

TEST_CASE("mean-constraint brute force") {
    // Diagonal stats are explainable at guessing probability 1.
    CHECK(solve_mean_constraint_bruteforce(1.0, 0.5, 0.3, 0.3, 12, 1e-2) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // mu = 0.2 photons through a pi = 0.9 splitter cannot separate the
    // shutter settings by more than mu (1 - pi) = 0.02; both routes agree
    // that d = 0.05 is unexplainable.
    CHECK_THROWS_AS(certify_mean_constraint(MeanConstrainedSource(0.2, 0.9), 0.05, 0.0),
                    InfeasibleStats);
    CHECK_THROWS_AS(solve_mean_constraint_bruteforce(0.2, 0.9, 0.05, 0.0, 12, 1e-3),
                    LpInfeasible);

    // The oracle is a lower bound: never above the closed form plus slack.
    const double closed =
        certify_mean_constraint(MeanConstrainedSource(0.2, 0.9), 0.015, 0.0).g_star;
    const double oracle = solve_mean_constraint_bruteforce(0.2, 0.9, 0.015, 0.0, 12, 1e-3);
    CHECK(oracle <= closed + 1e-6);
    CHECK(closed <= oracle + kMeanOracleTol);

    // Matches the frozen three-point example within grid slack.
    const double brute = solve_mean_constraint_bruteforce(1.0, 0.5, 0.4, 0.0, 12, 1e-3);
    CHECK(brute == doctest::Approx(0.8).epsilon(1e-3));

    CHECK_THROWS_AS(solve_mean_constraint_bruteforce(1.0, 0.5, 0.4, 0.0, 17, 1e-3),
                    ScaleExceeded);
}

TEST_CASE("response-function brute force") {
    // n photons reduce to a simple source with p = 1 - pi^n.
    CHECK(bruteforce_response_functions(1, 0.5, 0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-10));

    const double via_subsets = bruteforce_response_functions(3, 0.5, 0.875, 0.0);
    const double via_simple = solve_simple_lp(0.875, 0.875, 0.0, true).g_star;
    CHECK(via_subsets == doctest::Approx(via_simple).epsilon(1e-10));

    // n = 0: only constant response functions exist, so only the diagonal
    // is reachable.
    CHECK(bruteforce_response_functions(0, 0.5, 0.2, 0.2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(bruteforce_response_functions(0, 0.5, 0.5, 0.0), LpInfeasible);

    CHECK_THROWS_AS(bruteforce_response_functions(13, 0.5, 0.5, 0.0), ScaleExceeded);
}

TEST_CASE("response-function equivalence over random instances") {
    auto photon = run_oracle_check(OracleScope::Photon, 60, 17);
    CHECK(photon.pass);
    CHECK(photon.max_delta <= 1e-10);
}
