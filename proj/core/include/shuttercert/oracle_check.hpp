#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shuttercert/model.hpp"
#include "shuttercert/rng.hpp"

namespace shuttercert {

enum class OracleScope { Simple, Mixed, Mean, Photon };

OracleScope parse_oracle_scope(const std::string& name);
std::string to_string(OracleScope scope);

struct OracleReport {
    OracleScope scope = OracleScope::Simple;
    int instances = 0;
    std::vector<double> deltas;  // per-instance |closed - oracle|
    double max_delta = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double seconds = 0.0;

    std::string to_json() const;
};

// Closed-form vs oracle tolerances. The mean-constraint bound carries the
// brute-force discretization slack: grid resolution times a Lipschitz
// constant of at most 2*(support_max + 1) for the gridded weight.
inline constexpr double kSimpleOracleTol = 1e-8;
inline constexpr double kMixedOracleTol = 1e-8;
inline constexpr double kPhotonOracleTol = 1e-10;
inline constexpr int kMeanOracleSupportMax = 12;
inline constexpr double kMeanOracleGrid = 1e-3;
inline constexpr double kMeanOracleTol = kMeanOracleGrid * 2.0 * (kMeanOracleSupportMax + 1);

// Randomized feasible instances for the equivalence suites.
struct SimpleInstance {
    double p, alpha, beta;
};
SimpleInstance random_simple_instance(Rng& rng, bool allow_flip = true);

struct MixedInstance {
    MixedSource source;
    double alpha, beta;
};
MixedInstance random_mixed_instance(Rng& rng, std::size_t max_components = 10,
                                    bool allow_flip = true);

struct MeanInstance {
    double mu, pi, alpha, beta;
};
// Keeps the optimal support within the brute-force oracle's reach
// (alpha - beta of order mu/9 or larger).
MeanInstance random_mean_instance(Rng& rng);

struct PhotonInstance {
    int n;
    double pi, alpha, beta;
};
// Cycles n deterministically so a K-instance run covers all n in [1, 10].
PhotonInstance random_photon_instance(Rng& rng, int index);

// Runs `instances` randomized closed-form vs oracle comparisons and reports
// the worst absolute deviation.
OracleReport run_oracle_check(OracleScope scope, int instances, std::uint64_t seed);

}  // namespace shuttercert
