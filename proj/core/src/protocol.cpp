#include "shuttercert/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "shuttercert/rng.hpp"

namespace shuttercert {

void HonestDevice::validate() const {
    check_probability(detector_efficiency, "detector_efficiency");
    check_probability(dark_count, "dark_count");
    check_probability(extinction, "extinction");
}

AdversarialDevice::AdversarialDevice(MixedSource src, std::vector<StrategyMix> mixes,
                                     std::uint64_t seed_)
    : source(std::move(src)), lambdas(std::move(mixes)), seed(seed_) {
    if (lambdas.size() != source.size()) {
        throw std::invalid_argument("need one strategy mix per mixture component");
    }
}

AdversarialDevice::AdversarialDevice(const SimpleSource& src, const StrategyMix& mix,
                                     std::uint64_t seed_)
    : source(MixedSource({{1.0, src.p}})), lambdas{mix}, seed(seed_) {}

namespace {

struct RoundControl {
    RoundType type;
    std::uint8_t x;
};

RoundControl draw_round_control(const ProtocolConfig& config, Rng& rng) {
    if (rng.bernoulli(config.test_rate)) {
        return {RoundType::Test, rng.bernoulli(config.shutter_split) ? std::uint8_t{1}
                                                                     : std::uint8_t{0}};
    }
    return {RoundType::Gen, 0};
}

// Signal emission for one round of the honest source.
bool draw_signal(const SourceModel& source, Rng& rng) {
    struct Visitor {
        Rng& rng;
        bool operator()(const SimpleSource& s) { return rng.bernoulli(s.p); }
        bool operator()(const MixedSource& s) {
            double u = rng.uniform();
            for (const auto& c : s.components()) {
                u -= c.gamma;
                if (u < 0.0) return rng.bernoulli(c.p);
            }
            return rng.bernoulli(s.components().back().p);
        }
        bool operator()(const MeanConstrainedSource& s) {
            const std::uint64_t photons = rng.poisson(s.mu);
            if (photons == 0) return false;
            return rng.bernoulli(1.0 - std::pow(s.pi, static_cast<double>(photons)));
        }
    };
    return std::visit(Visitor{rng}, source);
}

}  // namespace

std::vector<RoundRecord> run_protocol(const ProtocolConfig& config, const HonestDevice& device) {
    config.validate();
    device.validate();
    Rng rng(config.rng_seed);
    std::vector<RoundRecord> records;
    records.reserve(config.batch_size);
    for (std::size_t i = 0; i < config.batch_size; ++i) {
        const RoundControl ctl = draw_round_control(config, rng);
        const bool emitted = draw_signal(device.source, rng);
        bool arrives = emitted;
        if (ctl.x == 1 && arrives) arrives = rng.bernoulli(device.extinction);
        bool click = arrives && rng.bernoulli(device.detector_efficiency);
        if (!click) click = rng.bernoulli(device.dark_count);
        records.push_back({ctl.type, ctl.x, static_cast<std::uint8_t>(click ? 1 : 0)});
    }
    return records;
}

AdversarialRun run_protocol(const ProtocolConfig& config, const AdversarialDevice& device) {
    config.validate();
    Rng rng(config.rng_seed);
    Rng shared(device.seed);  // hidden variable stream shared with the adversary
    const auto& comps = device.source.components();

    AdversarialRun run;
    run.records.reserve(config.batch_size);
    run.draws.reserve(config.batch_size);
    for (std::size_t i = 0; i < config.batch_size; ++i) {
        const RoundControl ctl = draw_round_control(config, rng);

        double u = shared.uniform();
        std::uint32_t comp = static_cast<std::uint32_t>(comps.size() - 1);
        for (std::uint32_t c = 0; c < comps.size(); ++c) {
            u -= comps[c].gamma;
            if (u < 0.0) {
                comp = c;
                break;
            }
        }
        const StrategyMix& mix = device.lambdas[comp];
        double v = shared.uniform();
        Strategy strat = Strategy::Dishonest;
        if ((v -= mix.never) < 0.0) {
            strat = Strategy::NeverClick;
        } else if ((v -= mix.always) < 0.0) {
            strat = Strategy::AlwaysClick;
        } else if ((v -= mix.honest) < 0.0) {
            strat = Strategy::Honest;
        }

        const bool signal_through = ctl.x == 0 && rng.bernoulli(comps[comp].p);
        bool click = false;
        switch (strat) {
            case Strategy::NeverClick: click = false; break;
            case Strategy::AlwaysClick: click = true; break;
            case Strategy::Honest: click = signal_through; break;
            case Strategy::Dishonest: click = !signal_through; break;
        }
        run.records.push_back({ctl.type, ctl.x, static_cast<std::uint8_t>(click ? 1 : 0)});
        run.draws.push_back({comp, strat});
    }
    return run;
}

double adversary_guess_rate(const AdversarialDevice& device, const AdversarialRun& run) {
    if (run.records.size() != run.draws.size()) {
        throw std::invalid_argument("records and draws must align");
    }
    const auto& comps = device.source.components();
    std::size_t gen = 0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < run.records.size(); ++i) {
        if (run.records[i].type != RoundType::Gen) continue;
        ++gen;
        const StrategyDraw d = run.draws[i];
        int guess = 0;
        switch (d.strategy) {
            case Strategy::NeverClick: guess = 0; break;
            case Strategy::AlwaysClick: guess = 1; break;
            case Strategy::Honest: guess = comps[d.component].p >= 0.5 ? 1 : 0; break;
            case Strategy::Dishonest: guess = comps[d.component].p >= 0.5 ? 0 : 1; break;
        }
        if (guess == run.records[i].y) ++correct;
    }
    if (gen == 0) throw std::invalid_argument("run has no generation rounds");
    return static_cast<double>(correct) / static_cast<double>(gen);
}

}  // namespace shuttercert
