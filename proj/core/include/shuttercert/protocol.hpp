#pragma once

#include <cstdint>
#include <vector>

#include "shuttercert/model.hpp"

namespace shuttercert {

// Honest device: the assumed source plus detector imperfections. Dark
// counts and extinction leakage combine with the signal by inclusive OR of
// independent Bernoulli events. A mean-constrained source is realized as a
// Poisson photon-number distribution with p_k = 1 - pi^k.
struct HonestDevice {
    SourceModel source;
    double detector_efficiency = 1.0;  // eta
    double dark_count = 0.0;           // click probability with no light
    double extinction = 0.0;           // click-through probability when shutter closed

    void validate() const;
};

enum class Strategy : std::uint8_t { NeverClick, AlwaysClick, Honest, Dishonest };

// Adversarially programmed device: in each round the active component is
// drawn from the mixture, then a deterministic strategy from that
// component's mix; both draws are shared with the adversary.
struct AdversarialDevice {
    MixedSource source;
    std::vector<StrategyMix> lambdas;  // one per component
    std::uint64_t seed = 0;

    AdversarialDevice(MixedSource src, std::vector<StrategyMix> mixes, std::uint64_t seed_);
    AdversarialDevice(const SimpleSource& src, const StrategyMix& mix, std::uint64_t seed_);
};

struct StrategyDraw {
    std::uint32_t component = 0;
    Strategy strategy = Strategy::Honest;
};

struct AdversarialRun {
    std::vector<RoundRecord> records;
    std::vector<StrategyDraw> draws;  // one per round, the adversary's side information
};

// One Protocol-1 batch: each round is independently a test round with
// probability q; test rounds draw the shutter bit, generation rounds keep
// it open. Deterministic given config.rng_seed.
std::vector<RoundRecord> run_protocol(const ProtocolConfig& config, const HonestDevice& device);

AdversarialRun run_protocol(const ProtocolConfig& config, const AdversarialDevice& device);

// Fraction of generation rounds the optimal lambda-informed guesser
// predicts correctly; must stay below any sound certified bound.
double adversary_guess_rate(const AdversarialDevice& device, const AdversarialRun& run);

}  // namespace shuttercert
