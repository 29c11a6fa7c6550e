#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace shuttercert {

// Packed bit vector, LSB-first within each 64-bit word. The byte
// serialization puts bit i at byte i/8, LSB-first, matching the bits.bin
// format.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t nbits) : bits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return bits_; }
    bool empty() const { return bits_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    std::size_t popcount() const;

    // Clears any set bits beyond size() in the last word.
    void mask_tail();

    void append(const BitVec& other);

    std::vector<std::uint8_t> to_bytes() const;
    static BitVec from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits);

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.bits_ == b.bits_ && a.words_ == b.words_;
    }

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace shuttercert
