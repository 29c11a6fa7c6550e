#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shuttercert/bitvec.hpp"
#include "shuttercert/model.hpp"

namespace shuttercert {

// rounds.bin: little-endian prologue
//   magic "SHRN" | version u16 | reserved u16 | record count u64 | q f64
// followed by one byte per round: bit0 = round type (1 = test), bit1 = x,
// bit2 = y, bits 3-7 zero.
struct RoundsFile {
    double q = 0.0;
    std::vector<RoundRecord> records;
};

inline constexpr std::uint16_t kRoundsFormatVersion = 1;

void write_rounds(const std::filesystem::path& path, const RoundsFile& file);
RoundsFile read_rounds(const std::filesystem::path& path);

// cert.jsonl: one object per batch with exactly these keys.
struct CertRecord {
    std::uint64_t batch = 0;
    std::int64_t n_alpha = 0;
    std::int64_t t_alpha = 0;
    std::int64_t n_beta = 0;
    std::int64_t t_beta = 0;
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
    double g_star = 1.0;
    double h = 0.0;
    bool feasible = false;
};

void write_cert_jsonl(const std::filesystem::path& path, const std::vector<CertRecord>& records);
std::vector<CertRecord> read_cert_jsonl(const std::filesystem::path& path);

// bits.bin: packed output bits, bit i at byte i/8 LSB-first, final partial
// byte zero-padded; the exact bit count lives in the manifest.
void write_bits(const std::filesystem::path& path, const BitVec& bits);
BitVec read_bits(const std::filesystem::path& path, std::size_t bit_count);

void write_text(const std::filesystem::path& path, const std::string& text);

// Mixture description file: whitespace-separated "gamma p" per line,
// '#' starts a comment.
MixedSource read_gamma_file(const std::filesystem::path& path);

}  // namespace shuttercert
