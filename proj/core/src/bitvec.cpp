#include "shuttercert/bitvec.hpp"

#include <bit>

namespace shuttercert {

std::size_t BitVec::popcount() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

void BitVec::mask_tail() {
    const std::size_t rem = bits_ & 63;
    if (rem != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << rem) - 1;
    }
}

void BitVec::append(const BitVec& other) {
    const std::size_t shift = bits_ & 63;
    if (shift == 0) {
        words_.resize((bits_ + other.bits_ + 63) / 64, 0);
        for (std::size_t w = 0; w < other.words_.size(); ++w) {
            words_[(bits_ >> 6) + w] = other.words_[w];
        }
    } else {
        words_.resize((bits_ + other.bits_ + 63) / 64, 0);
        std::size_t w0 = bits_ >> 6;
        for (std::size_t w = 0; w < other.words_.size(); ++w) {
            words_[w0 + w] |= other.words_[w] << shift;
            if (w0 + w + 1 < words_.size()) {
                words_[w0 + w + 1] |= other.words_[w] >> (64 - shift);
            }
        }
    }
    bits_ += other.bits_;
    mask_tail();
}

std::vector<std::uint8_t> BitVec::to_bytes() const {
    std::vector<std::uint8_t> out((bits_ + 7) / 8, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> ((i & 7) * 8));
    }
    return out;
}

BitVec BitVec::from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    BitVec v(nbits);
    const std::size_t nbytes = std::min(bytes.size(), (nbits + 7) / 8);
    for (std::size_t i = 0; i < nbytes; ++i) {
        v.words_[i >> 3] |= std::uint64_t{bytes[i]} << ((i & 7) * 8);
    }
    v.mask_tail();
    return v;
}

}  // namespace shuttercert
