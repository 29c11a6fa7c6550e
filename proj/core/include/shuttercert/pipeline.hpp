#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shuttercert/bitvec.hpp"
#include "shuttercert/io.hpp"
#include "shuttercert/model.hpp"

namespace shuttercert {

enum class DiscardReason : std::uint8_t { None, BelowCutoff, InfeasibleStats, ShortBatch };

std::string to_string(DiscardReason r);

struct BatchResult {
    std::size_t index = 0;
    std::int64_t n_alpha = 0;
    std::int64_t t_alpha = 0;
    std::int64_t n_beta = 0;
    std::int64_t t_beta = 0;
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
    double g_star = 1.0;
    double h = 0.0;
    bool feasible = false;
    DiscardReason discard = DiscardReason::None;
    std::size_t surplus_bits = 0;  // generation bits beyond the fixed |Y|
};

struct PipelineOptions {
    double epsilon = 1e-6;
    double delta_log2 = -100.0;
    std::size_t y_length = 83000;  // fixed |Y| per batch; surplus is discarded
    std::uint64_t master_seed = 0;
    double max_seed_reuse = 1e20;
    bool clamp = false;
    unsigned threads = 0;  // 0 = SHUTTER_CERTIFY_THREADS or hardware default
};

struct PipelineReport {
    Assumption assumption = Assumption::Simple;
    std::vector<BatchResult> batches;
    double cutoff_h = 0.0;
    std::size_t m_bits = 0;
    std::size_t batches_used = 0;
    std::uint64_t extracted_bits = 0;
    std::uint64_t surplus_bits_discarded = 0;
    std::string seed_digest;
    std::uint64_t seed_reuse_count = 0;
    std::optional<double> monobit = std::nullopt;
    BitVec output;

    std::size_t discard_count(DiscardReason r) const;
};

// Thread cap: SHUTTER_CERTIFY_THREADS when set, logical cores otherwise.
unsigned thread_cap();

// Per-batch test statistics, confidence adjustment, and certification.
// Batches whose adjusted estimates land on or below the diagonal certify
// nothing (the one-sided adjustments presuppose alpha >= beta); infeasible
// stats mark the batch discarded unless clamping is on.
std::vector<BatchResult> certify_batches(std::span<const RoundRecord> rounds,
                                         std::size_t batch_rounds, Assumption assumption,
                                         const SourceModel& model, const PipelineOptions& opt);

// Cutoff optimization over the surviving batches and Toeplitz extraction of
// those at or above the cutoff, in batch order.
PipelineReport extract_batches(std::span<const RoundRecord> rounds, std::size_t batch_rounds,
                               std::vector<BatchResult> batches, Assumption assumption,
                               const PipelineOptions& opt);

// Full pipeline: rounds -> stats -> certification -> cutoff -> extraction.
PipelineReport process_batches(std::span<const RoundRecord> rounds, std::size_t batch_rounds,
                               Assumption assumption, const SourceModel& model,
                               const PipelineOptions& opt);

// Standardized deviation of the ones count; a cheap plumbing check, not a
// statistical test suite. Requires at least 1000 bits.
double monobit_z(const BitVec& bits);

BatchResult batch_from_cert(const CertRecord& r);
CertRecord cert_from_batch(const BatchResult& b);

std::string report_json(const PipelineReport& report);

}  // namespace shuttercert
