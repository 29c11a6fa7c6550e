#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "shuttercert/bitvec.hpp"

namespace shuttercert {

// Leftover-hash output length: m = floor(n*h + 2*delta_log2), floored so
// rounding never lands on the optimistic side. Throws InsufficientEntropy
// below one bit.
std::size_t output_length(std::size_t n_bits, double per_bit_entropy, double delta_log2);

struct ExtractorConfig {
    std::size_t input_length = 83000;  // n
    std::size_t output_length = 0;     // m
    double delta_log2 = -100.0;        // log2 of the security parameter delta
    std::uint64_t master_seed = 0;

    std::size_t seed_bits() const { return input_length + output_length - 1; }
};

// One-shot Toeplitz hash over GF(2): output_j = XOR_k input_k * seed_{j-k+n-1},
// i.e. T_{jk} = seed[j - k + n - 1] with seed of length n + m - 1.
BitVec toeplitz_hash(const BitVec& input, const BitVec& seed, std::size_t m);

// Word-blocked hasher for a fixed (n, m). The seed is expanded once into
// 64 bit-shifted copies so each input bit XORs an aligned m-bit window into
// the accumulator. Reuse of one seed across batches is what the delta
// budget pays for; the counter enforces a configurable cap (2^-100 supports
// about 1e20 reuses at 1e-10 total distance).
class ToeplitzHasher {
public:
    ToeplitzHasher(BitVec seed, std::size_t n, std::size_t m, double max_reuse = 1e20);

    BitVec hash(const BitVec& input) const;

    std::uint64_t uses() const { return uses_.load(); }
    std::size_t input_length() const { return n_; }
    std::size_t output_length() const { return m_; }
    const BitVec& seed() const { return seed_; }

private:
    BitVec seed_;
    std::size_t n_, m_;
    double max_reuse_;
    std::size_t window_words_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> shifted_;  // 64 rows of the seed, row s shifted right by s
    mutable std::atomic<std::uint64_t> uses_{0};
};

struct CutoffResult {
    double cutoff = 0.0;
    std::size_t output_bits_per_batch = 0;  // m at the cutoff
    std::size_t batches_used = 0;
    std::uint64_t total_bits = 0;
};

// Picks the cutoff entropy maximizing (batches at or above cutoff) x
// output_length(n, cutoff); batches below the cutoff are discarded. Ties
// break toward the larger cutoff.
CutoffResult optimize_cutoff(std::span<const double> entropies, std::size_t n_bits,
                             double delta_log2);

// Deterministic seed material for the run's single Toeplitz matrix.
BitVec generate_seed_bits(std::uint64_t master_seed, std::size_t nbits);

}  // namespace shuttercert
