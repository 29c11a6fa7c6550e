#include "shuttercert/extractor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "shuttercert/errors.hpp"
#include "shuttercert/rng.hpp"

namespace shuttercert {

std::size_t output_length(std::size_t n_bits, double per_bit_entropy, double delta_log2) {
    if (!(per_bit_entropy >= 0.0 && per_bit_entropy <= 1.0)) {
        throw std::invalid_argument("per-bit entropy must lie in [0,1]");
    }
    if (!(delta_log2 < 0.0)) throw std::invalid_argument("delta_log2 must be < 0");
    const double m = std::floor(static_cast<double>(n_bits) * per_bit_entropy + 2.0 * delta_log2);
    if (m < 1.0) {
        throw InsufficientEntropy("leftover-hash output length below one bit");
    }
    return static_cast<std::size_t>(m);
}

ToeplitzHasher::ToeplitzHasher(BitVec seed, std::size_t n, std::size_t m, double max_reuse)
    : seed_(std::move(seed)), n_(n), m_(m), max_reuse_(max_reuse) {
    if (n_ == 0 || m_ == 0) throw LengthMismatch("toeplitz dimensions must be positive");
    if (seed_.size() != n_ + m_ - 1) {
        throw LengthMismatch("toeplitz seed must have n + m - 1 bits");
    }
    window_words_ = (m_ + 63) / 64;

    // 64 pre-shifted copies of the seed: row s holds the seed shifted right
    // by s bits, so any bit-offset window becomes a word-aligned slice.
    const std::size_t seed_words = seed_.words().size();
    stride_ = seed_words + 1;
    shifted_.assign(64 * stride_, 0);
    std::vector<std::uint64_t> padded(seed_.words());
    padded.push_back(0);
    padded.push_back(0);
    for (std::size_t s = 0; s < 64; ++s) {
        std::uint64_t* row = shifted_.data() + s * stride_;
        if (s == 0) {
            for (std::size_t i = 0; i < stride_; ++i) row[i] = padded[i];
        } else {
            for (std::size_t i = 0; i < stride_; ++i) {
                row[i] = (padded[i] >> s) | (padded[i + 1] << (64 - s));
            }
        }
    }
}

BitVec ToeplitzHasher::hash(const BitVec& input) const {
    if (input.size() != n_) throw LengthMismatch("input length does not match hasher");
    const std::uint64_t used = uses_.fetch_add(1) + 1;
    if (static_cast<double>(used) > max_reuse_) {
        throw Error("toeplitz seed reuse budget exhausted");
    }

    BitVec out(m_);
    std::uint64_t* acc = out.words().data();
    const std::size_t mw = window_words_;

    // out = XOR over set input bits k of the seed window starting at bit
    // n-1-k (column k of the Toeplitz matrix).
    const auto& in_words = input.words();
    for (std::size_t w = 0; w < in_words.size(); ++w) {
        std::uint64_t bits = in_words[w];
        while (bits != 0) {
            const int tz = std::countr_zero(bits);
            bits &= bits - 1;
            const std::size_t k = (w << 6) + static_cast<std::size_t>(tz);
            const std::size_t start = n_ - 1 - k;
            const std::uint64_t* src = shifted_.data() + (start & 63) * stride_ + (start >> 6);
            for (std::size_t t = 0; t < mw; ++t) acc[t] ^= src[t];
        }
    }
    out.mask_tail();
    return out;
}

BitVec toeplitz_hash(const BitVec& input, const BitVec& seed, std::size_t m) {
    return ToeplitzHasher(seed, input.size(), m, 1e20).hash(input);
}

CutoffResult optimize_cutoff(std::span<const double> entropies, std::size_t n_bits,
                             double delta_log2) {
    if (entropies.empty()) throw std::invalid_argument("cutoff needs at least one batch entropy");
    std::vector<double> sorted(entropies.begin(), entropies.end());
    std::sort(sorted.begin(), sorted.end());

    CutoffResult best;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        const double h = sorted[i];
        std::size_t m;
        try {
            m = output_length(n_bits, h, delta_log2);
        } catch (const InsufficientEntropy&) {
            continue;
        }
        const std::size_t used = sorted.size() - i;
        const std::uint64_t total = static_cast<std::uint64_t>(m) * used;
        if (total > best.total_bits || (total == best.total_bits && h > best.cutoff)) {
            best = {h, m, used, total};
        }
    }
    return best;
}

BitVec generate_seed_bits(std::uint64_t master_seed, std::size_t nbits) {
    Rng rng(derive_seed(master_seed, 0x7031u));
    BitVec v(nbits);
    for (auto& w : v.words()) w = rng.u64();
    v.mask_tail();
    return v;
}

}  // namespace shuttercert
