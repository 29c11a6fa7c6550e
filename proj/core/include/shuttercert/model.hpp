#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shuttercert/errors.hpp"

namespace shuttercert {

// Absolute tolerance for constraint sums (weights, strategy mixes). Far
// below statistical noise, catches genuine construction bugs.
inline constexpr double kSumTolerance = 1e-12;

enum class Assumption { Simple, KnownDistribution, MeanConstraint };

std::string to_string(Assumption a);

// Entropy source emitting a signal with fixed probability p per round.
struct SimpleSource {
    double p = 0.0;

    explicit SimpleSource(double p_);

    // Adversary's guessing probability for an honestly reported round.
    double guess_bound() const { return p >= 0.5 ? p : 1.0 - p; }
};

struct MixedComponent {
    double gamma = 0.0;  // mixing weight
    double p = 0.0;      // signal probability of this component
};

// Probabilistic mixture of simple sources. Components are kept sorted by
// nondecreasing p; the round's active component is known to the adversary.
class MixedSource {
public:
    explicit MixedSource(std::vector<MixedComponent> components);

    const std::vector<MixedComponent>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }

    // Index of the first component with p > 1/2; components [idx, size)
    // form the partition where honest play beats a coin flip.
    std::size_t positive_begin() const { return positive_begin_; }

    // Aggregate signal probability; defines the mixture's strategy polytope.
    double mean_signal_probability() const { return mean_p_; }

private:
    std::vector<MixedComponent> components_;
    std::size_t positive_begin_ = 0;
    double mean_p_ = 0.0;
};

// Source known only through its mean photon number; per-photon-count signal
// probabilities follow the beam-splitter law p_i = 1 - pi^i.
struct MeanConstrainedSource {
    double mu = 0.0;
    double pi = 0.5;

    MeanConstrainedSource(double mu_, double pi_);
};

using SourceModel = std::variant<SimpleSource, MixedSource, MeanConstrainedSource>;

// Test-round counts and the one-sided confidence-adjusted estimates built
// from them. alpha_hat is adjusted downward, beta_hat upward, so a bound
// computed from them never over-certifies (at joint confidence >= (1-eps)^2).
struct ObservedStats {
    std::int64_t n_alpha = 0;
    std::int64_t t_alpha = 0;
    std::int64_t n_beta = 0;
    std::int64_t t_beta = 0;
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
    double epsilon = 0.0;
    double joint_confidence = 0.0;
};

// Convex weights over the four deterministic detector strategies
// (never / always / honest / dishonest click).
struct StrategyMix {
    double never = 0.0;
    double always = 0.0;
    double honest = 0.0;
    double dishonest = 0.0;

    StrategyMix() = default;
    StrategyMix(double n, double y, double h, double nh);

    double sum() const { return never + always + honest + dishonest; }
};

struct CertificationResult {
    double g_star = 1.0;          // adversary's optimal guessing probability
    double per_bit_entropy = 0.0; // -log2(g_star)
    Assumption assumption = Assumption::Simple;
    bool feasible = false;
    bool degenerate = false;      // set when p in {0,1} made the bound vacuous
    std::vector<StrategyMix> witness;  // per component, filled by LP oracle runs
};

CertificationResult make_result(Assumption assumption, double g_star, bool feasible,
                                bool degenerate = false);

struct ProtocolConfig {
    std::size_t batch_size = 100000;
    double test_rate = 0.08;      // probability that a round is a test round
    double shutter_split = 0.5;   // probability of x=1 within test rounds
    std::uint64_t rng_seed = 0;

    void validate() const;
};

enum class RoundType : std::uint8_t { Gen = 0, Test = 1 };

struct RoundRecord {
    RoundType type = RoundType::Gen;
    std::uint8_t x = 0;  // shutter bit, 0 open / 1 closed; generation rounds have x=0
    std::uint8_t y = 0;  // detector bit, 1 = click
};

struct OrientedStats {
    double alpha = 0.0;
    double beta = 0.0;
    bool flipped = false;
};

// Canonicalizes (alpha, beta) into the alpha >= beta half-plane via the
// complement map (alpha, beta) -> (1-alpha, 1-beta), the affine symmetry of
// the strategy polytope that swaps never<->always and honest<->dishonest.
// The guessing bound is invariant under this map.
OrientedStats normalize_orientation(double alpha, double beta);

// Existence of a strategy decomposition: after orientation normalization,
// 0 <= beta <= alpha <= p + beta(1-p).
bool feasible(double alpha, double beta, double p);

// Largest alpha any per-component strategy assignment can produce at the
// given (normalized) beta: p_bar plus the closed-shutter mass greedily
// routed through the lowest-p components. The single-source polytope chord
// p + beta(1-p) is the one-component special case; for mixtures the
// boundary is piecewise linear and lies above the aggregate chord.
double max_alpha_given_beta(const MixedSource& source, double beta);

// Mixture feasibility: (alpha, beta) is reproducible by per-component
// strategy mixes iff, after orientation normalization,
// beta <= alpha <= max_alpha_given_beta(source, beta).
bool feasible(const MixedSource& source, double alpha, double beta);

void check_probability(double v, const char* name);

}  // namespace shuttercert
