#include "shuttercert/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "shuttercert/certify.hpp"
#include "shuttercert/extractor.hpp"
#include "shuttercert/sampling.hpp"
#include "shuttercert/sha256.hpp"

namespace shuttercert {

std::string to_string(DiscardReason r) {
    switch (r) {
        case DiscardReason::None: return "none";
        case DiscardReason::BelowCutoff: return "below-cutoff";
        case DiscardReason::InfeasibleStats: return "infeasible-stats";
        case DiscardReason::ShortBatch: return "short-batch";
    }
    return "?";
}

std::size_t PipelineReport::discard_count(DiscardReason r) const {
    std::size_t n = 0;
    for (const auto& b : batches) {
        if (b.discard == r) ++n;
    }
    return n;
}

unsigned thread_cap() {
    if (const char* env = std::getenv("SHUTTER_CERTIFY_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers; results must
// be written to disjoint slots so the outcome is order-independent.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    const unsigned workers = std::min<std::size_t>(threads, count);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::size_t full_batches(std::size_t total, std::size_t batch_rounds) {
    return total / batch_rounds;
}

}  // namespace

std::vector<BatchResult> certify_batches(std::span<const RoundRecord> rounds,
                                         std::size_t batch_rounds, Assumption assumption,
                                         const SourceModel& model, const PipelineOptions& opt) {
    if (batch_rounds < 1) throw std::invalid_argument("batch_rounds must be >= 1");
    const std::size_t full = full_batches(rounds.size(), batch_rounds);
    const bool tail = rounds.size() % batch_rounds != 0;
    std::vector<BatchResult> results(full + (tail ? 1 : 0));

    parallel_for(full, opt.threads ? opt.threads : thread_cap(), [&](std::size_t b) {
        BatchResult& r = results[b];
        r.index = b;
        const auto* begin = rounds.data() + b * batch_rounds;
        for (std::size_t i = 0; i < batch_rounds; ++i) {
            const RoundRecord& rec = begin[i];
            if (rec.type != RoundType::Test) continue;
            if (rec.x == 0) {
                ++r.n_alpha;
                r.t_alpha += rec.y;
            } else {
                ++r.n_beta;
                r.t_beta += rec.y;
            }
        }
        if (r.n_alpha < 1 || r.n_beta < 1) {
            r.discard = DiscardReason::ShortBatch;  // not enough test rounds to estimate
            return;
        }
        const ObservedStats s =
            estimate_stats(r.n_alpha, r.t_alpha, r.n_beta, r.t_beta, opt.epsilon);
        r.alpha_hat = s.alpha_hat;
        r.beta_hat = s.beta_hat;
        if (s.alpha_hat <= s.beta_hat) {
            // The adjusted point crossed the diagonal: the one-sided
            // estimator directions only certify the alpha >= beta case.
            r.g_star = 1.0;
            r.h = 0.0;
            r.feasible = true;
            return;
        }
        try {
            const CertificationResult c =
                certify_with(assumption, model, s.alpha_hat, s.beta_hat, opt.clamp);
            r.g_star = c.g_star;
            r.h = c.per_bit_entropy;
            r.feasible = true;
        } catch (const InfeasibleStats&) {
            r.g_star = 1.0;
            r.h = 0.0;
            r.feasible = false;
            r.discard = DiscardReason::InfeasibleStats;
        }
    });

    if (tail) {
        results.back().index = full;
        results.back().discard = DiscardReason::ShortBatch;
    }
    return results;
}

PipelineReport extract_batches(std::span<const RoundRecord> rounds, std::size_t batch_rounds,
                               std::vector<BatchResult> batches, Assumption assumption,
                               const PipelineOptions& opt) {
    PipelineReport report;
    report.assumption = assumption;

    // Collect the fixed-length generation bits per still-alive batch.
    std::vector<BitVec> gen_bits(batches.size());
    const std::size_t full = full_batches(rounds.size(), batch_rounds);
    parallel_for(std::min(full, batches.size()), opt.threads ? opt.threads : thread_cap(),
                 [&](std::size_t b) {
                     BatchResult& r = batches[b];
                     if (r.discard != DiscardReason::None) return;
                     BitVec bits(opt.y_length);
                     std::size_t got = 0;
                     std::size_t surplus = 0;
                     const auto* begin = rounds.data() + b * batch_rounds;
                     for (std::size_t i = 0; i < batch_rounds; ++i) {
                         if (begin[i].type != RoundType::Gen) continue;
                         if (got < opt.y_length) {
                             bits.set(got++, begin[i].y != 0);
                         } else {
                             ++surplus;
                         }
                     }
                     r.surplus_bits = surplus;
                     if (got < opt.y_length) {
                         r.discard = DiscardReason::ShortBatch;
                         return;
                     }
                     gen_bits[b] = std::move(bits);
                 });

    std::vector<double> entropies;
    for (const auto& r : batches) {
        if (r.discard == DiscardReason::None) entropies.push_back(r.h);
    }

    CutoffResult cutoff;
    if (!entropies.empty()) {
        cutoff = optimize_cutoff(entropies, opt.y_length, opt.delta_log2);
    }
    report.cutoff_h = cutoff.cutoff;
    report.m_bits = cutoff.output_bits_per_batch;

    std::vector<std::size_t> survivors;
    for (auto& r : batches) {
        if (r.discard != DiscardReason::None) continue;
        if (cutoff.total_bits == 0 || r.h < cutoff.cutoff) {
            r.discard = DiscardReason::BelowCutoff;
        } else {
            survivors.push_back(r.index);
        }
    }

    if (!survivors.empty()) {
        const ExtractorConfig cfg{opt.y_length, cutoff.output_bits_per_batch, opt.delta_log2,
                                  opt.master_seed};
        const BitVec seed = generate_seed_bits(cfg.master_seed, cfg.seed_bits());
        const auto seed_bytes = seed.to_bytes();
        report.seed_digest = sha256_hex(seed_bytes);
        ToeplitzHasher hasher(seed, cfg.input_length, cfg.output_length, opt.max_seed_reuse);
        std::vector<BitVec> outputs(survivors.size());
        parallel_for(survivors.size(), opt.threads ? opt.threads : thread_cap(),
                     [&](std::size_t i) { outputs[i] = hasher.hash(gen_bits[survivors[i]]); });
        for (const auto& o : outputs) report.output.append(o);
        report.seed_reuse_count = hasher.uses();
    }

    report.batches = std::move(batches);
    report.batches_used = survivors.size();
    report.extracted_bits = report.output.size();
    for (const auto& r : report.batches) report.surplus_bits_discarded += r.surplus_bits;
    if (report.output.size() >= 1000) report.monobit = monobit_z(report.output);
    return report;
}

PipelineReport process_batches(std::span<const RoundRecord> rounds, std::size_t batch_rounds,
                               Assumption assumption, const SourceModel& model,
                               const PipelineOptions& opt) {
    std::vector<BatchResult> batches =
        certify_batches(rounds, batch_rounds, assumption, model, opt);
    return extract_batches(rounds, batch_rounds, std::move(batches), assumption, opt);
}

double monobit_z(const BitVec& bits) {
    if (bits.size() < 1000) throw std::invalid_argument("monobit needs at least 1000 bits");
    const double n = static_cast<double>(bits.size());
    const double ones = static_cast<double>(bits.popcount());
    return (2.0 * ones - n) / std::sqrt(n);
}

BatchResult batch_from_cert(const CertRecord& r) {
    BatchResult b;
    b.index = r.batch;
    b.n_alpha = r.n_alpha;
    b.t_alpha = r.t_alpha;
    b.n_beta = r.n_beta;
    b.t_beta = r.t_beta;
    b.alpha_hat = r.alpha_hat;
    b.beta_hat = r.beta_hat;
    b.g_star = r.g_star;
    b.h = r.h;
    b.feasible = r.feasible;
    b.discard = r.feasible ? DiscardReason::None : DiscardReason::InfeasibleStats;
    return b;
}

CertRecord cert_from_batch(const BatchResult& b) {
    CertRecord r;
    r.batch = b.index;
    r.n_alpha = b.n_alpha;
    r.t_alpha = b.t_alpha;
    r.n_beta = b.n_beta;
    r.t_beta = b.t_beta;
    r.alpha_hat = b.alpha_hat;
    r.beta_hat = b.beta_hat;
    r.g_star = b.g_star;
    r.h = b.h;
    r.feasible = b.feasible;
    return r;
}

std::string report_json(const PipelineReport& report) {
    nlohmann::json j;
    j["assumption"] = to_string(report.assumption);
    j["batches_total"] = report.batches.size();
    j["batches_used"] = report.batches_used;
    j["cutoff_h"] = report.cutoff_h;
    j["m_bits"] = report.m_bits;
    j["extracted_bits"] = report.extracted_bits;
    j["surplus_bits_discarded"] = report.surplus_bits_discarded;
    j["seed_sha256"] = report.seed_digest;
    j["seed_reuse_count"] = report.seed_reuse_count;
    j["discards"] = {{"below_cutoff", report.discard_count(DiscardReason::BelowCutoff)},
                     {"infeasible_stats", report.discard_count(DiscardReason::InfeasibleStats)},
                     {"short_batch", report.discard_count(DiscardReason::ShortBatch)}};
    if (report.monobit) j["monobit_z"] = *report.monobit;
    return j.dump(2);
}

}  // namespace shuttercert
