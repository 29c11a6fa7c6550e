#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "shuttercert/certify.hpp"
#include "shuttercert/pipeline.hpp"
#include "shuttercert/protocol.hpp"
#include "shuttercert/rng.hpp"

using namespace shuttercert;

namespace {

std::vector<RoundRecord> honest_rounds(std::size_t batches, std::size_t rounds, double q,
                                       std::uint64_t seed, double p = 0.5) {
    std::vector<RoundRecord> all;
    all.reserve(batches * rounds);
    for (std::uint64_t b = 0; b < batches; ++b) {
        ProtocolConfig config{rounds, q, 0.5, derive_seed(seed, b)};
        HonestDevice device{SimpleSource(p), 1.0, 0.0, 0.0};
        const auto r = run_protocol(config, device);
        all.insert(all.end(), r.begin(), r.end());
    }
    return all;
}

}  // namespace

TEST_CASE("monobit statistic") {
    BitVec alternating(10000);
    for (std::size_t i = 0; i < alternating.size(); i += 2) alternating.set(i, true);
    CHECK(monobit_z(alternating) == doctest::Approx(0.0));

    BitVec ones(10000);
    for (std::size_t i = 0; i < ones.size(); ++i) ones.set(i, true);
    CHECK(monobit_z(ones) == doctest::Approx(100.0));

    CHECK_THROWS_AS(monobit_z(BitVec(999)), std::invalid_argument);
}

TEST_CASE("pipeline: honest run extracts near the expected rate") {
    const auto rounds = honest_rounds(5, 100000, 0.08, 31337);
    PipelineOptions opt;
    opt.master_seed = 99;
    const auto report = process_batches(rounds, 100000, Assumption::Simple,
                                        SourceModel(SimpleSource(0.5)), opt);
    CHECK(report.batches.size() == 5);
    CHECK(report.batches_used == 5);
    for (const auto& b : report.batches) {
        CHECK(b.feasible);
        // Hoeffding-adjusted per-batch rate at these parameters.
        CHECK(b.h > 0.70);
        CHECK(b.h < 0.85);
    }
    // Extracted bits within 15% of 0.9 x |Y| per surviving batch.
    const double per_batch = double(report.extracted_bits) / 5.0;
    CHECK(per_batch > 0.85 * 0.9 * 83000.0);
    CHECK(per_batch < 1.15 * 0.9 * 83000.0);
    CHECK(report.monobit.has_value());
    CHECK(std::abs(*report.monobit) < 4.0);
    CHECK(!report.seed_digest.empty());
}

TEST_CASE("pipeline: determinism") {
    const auto rounds = honest_rounds(2, 50000, 0.08, 7);
    PipelineOptions opt;
    opt.y_length = 40000;
    opt.master_seed = 1;
    const auto a = process_batches(rounds, 50000, Assumption::Simple,
                                   SourceModel(SimpleSource(0.5)), opt);
    const auto b = process_batches(rounds, 50000, Assumption::Simple,
                                   SourceModel(SimpleSource(0.5)), opt);
    CHECK(a.output == b.output);
    CHECK(a.seed_digest == b.seed_digest);
    CHECK(a.cutoff_h == b.cutoff_h);

    // Thread cap does not change the result.
    PipelineOptions threaded = opt;
    threaded.threads = 4;
    const auto c = process_batches(rounds, 50000, Assumption::Simple,
                                   SourceModel(SimpleSource(0.5)), threaded);
    CHECK(a.output == c.output);
}

TEST_CASE("pipeline: infeasible batches carry discard reasons") {
    // An always-click device under a p = 0.1 simple assumption: alpha_hat
    // and beta_hat both sit near 1, so batches certify h = 0 rather than
    // failing, and extraction keeps them only if the cutoff pays.
    std::vector<RoundRecord> always;
    ProtocolConfig config{50000, 0.08, 0.5, 3};
    AdversarialDevice device(SimpleSource(0.1), StrategyMix(0.0, 1.0, 0.0, 0.0), 4);
    const auto run = run_protocol(config, device);
    PipelineOptions opt;
    opt.y_length = 40000;
    const auto report = process_batches(run.records, 50000, Assumption::Simple,
                                        SourceModel(SimpleSource(0.1)), opt);
    REQUIRE(report.batches.size() == 1);
    CHECK(report.batches[0].h == 0.0);
    CHECK(report.extracted_bits == 0);
    CHECK(report.batches_used == 0);
    for (const auto& b : report.batches) CHECK(b.discard != DiscardReason::None);
}

TEST_CASE("pipeline: stats that no simple source explains are discarded") {
    // Dishonest-leaning device against a mismatched assumed p: the
    // adjusted stats land outside the polytope.
    ProtocolConfig config{50000, 0.5, 0.5, 5};
    AdversarialDevice device(SimpleSource(0.9), StrategyMix(0.0, 0.0, 1.0, 0.0), 6);
    const auto run = run_protocol(config, device);
    PipelineOptions opt;
    opt.y_length = 20000;
    const auto report = process_batches(run.records, 50000, Assumption::Simple,
                                        SourceModel(SimpleSource(0.05)), opt);
    REQUIRE(report.batches.size() == 1);
    CHECK(report.batches[0].discard == DiscardReason::InfeasibleStats);
    CHECK(!report.batches[0].feasible);
    CHECK(report.extracted_bits == 0);

    // Clamping keeps the batch alive at a conservative rate.
    opt.clamp = true;
    const auto clamped = process_batches(run.records, 50000, Assumption::Simple,
                                         SourceModel(SimpleSource(0.05)), opt);
    CHECK(clamped.batches[0].feasible);
}

TEST_CASE("pipeline: short tail batch is discarded with a reason") {
    auto rounds = honest_rounds(1, 50000, 0.08, 11);
    rounds.resize(80000);  // one full batch plus a 30k tail
    PipelineOptions opt;
    opt.y_length = 40000;
    const auto report = process_batches(rounds, 50000, Assumption::Simple,
                                        SourceModel(SimpleSource(0.5)), opt);
    REQUIRE(report.batches.size() == 2);
    CHECK(report.batches[1].discard == DiscardReason::ShortBatch);
    CHECK(report.discard_count(DiscardReason::ShortBatch) == 1);
}

TEST_CASE("pipeline: three assumptions on the same rounds are ordered") {
    const auto rounds = honest_rounds(3, 100000, 0.08, 2718);
    PipelineOptions opt;
    opt.master_seed = 5;
    const double pi = 0.5, mu = 1.5;
    const auto simple = process_batches(rounds, 100000, Assumption::Simple,
                                        SourceModel(SimpleSource(1.0 - pi)), opt);
    const auto known = process_batches(rounds, 100000, Assumption::KnownDistribution,
                                       SourceModel(poisson_mixture(mu, pi)), opt);
    const auto mean = process_batches(rounds, 100000, Assumption::MeanConstraint,
                                      SourceModel(MeanConstrainedSource(mu, pi)), opt);
    for (std::size_t b = 0; b < 3; ++b) {
        CHECK(simple.batches[b].h > known.batches[b].h);
        CHECK(known.batches[b].h > mean.batches[b].h);
    }
    CHECK(simple.extracted_bits > known.extracted_bits);
    CHECK(known.extracted_bits > mean.extracted_bits);
}

TEST_CASE("thread cap honors the environment variable") {
    setenv("SHUTTER_CERTIFY_THREADS", "3", 1);
    CHECK(thread_cap() == 3);
    unsetenv("SHUTTER_CERTIFY_THREADS");
    CHECK(thread_cap() >= 1);
}

TEST_CASE("report json shape") {
    const auto rounds = honest_rounds(1, 50000, 0.08, 13);
    PipelineOptions opt;
    opt.y_length = 40000;
    const auto report = process_batches(rounds, 50000, Assumption::Simple,
                                        SourceModel(SimpleSource(0.5)), opt);
    const std::string json = report_json(report);
    CHECK(json.find("\"assumption\"") != std::string::npos);
    CHECK(json.find("\"batches_used\"") != std::string::npos);
    CHECK(json.find("\"discards\"") != std::string::npos);
}
