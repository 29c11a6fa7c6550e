#include "shuttercert/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shuttercert/errors.hpp"

namespace shuttercert {

namespace {

using nlohmann::json;

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[i]} << (8 * i);
    return v;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return data;
}

}  // namespace

void write_rounds(const std::filesystem::path& path, const RoundsFile& file) {
    std::string out;
    out.reserve(24 + file.records.size());
    out += "SHRN";
    put_u16(out, kRoundsFormatVersion);
    put_u16(out, 0);  // reserved
    put_u64(out, file.records.size());
    std::uint64_t qbits;
    static_assert(sizeof(qbits) == sizeof(file.q));
    std::memcpy(&qbits, &file.q, 8);
    put_u64(out, qbits);
    for (const RoundRecord& r : file.records) {
        if (r.type == RoundType::Gen && r.x != 0) {
            throw FormatError("generation rounds must have x = 0");
        }
        const std::uint8_t byte = static_cast<std::uint8_t>(
            (r.type == RoundType::Test ? 1u : 0u) | (r.x ? 2u : 0u) | (r.y ? 4u : 0u));
        out.push_back(static_cast<char>(byte));
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("short write to " + path.string());
}

RoundsFile read_rounds(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> data = slurp(path);
    if (data.size() < 24) throw FormatError("rounds file too short");
    if (std::memcmp(data.data(), "SHRN", 4) != 0) throw FormatError("bad rounds magic");
    const std::uint16_t version = static_cast<std::uint16_t>(data[4] | (data[5] << 8));
    if (version != kRoundsFormatVersion) throw FormatError("unsupported rounds version");
    const std::uint64_t count = get_u64(data.data() + 8);
    if (data.size() != 24 + count) throw FormatError("rounds file length mismatch");

    RoundsFile file;
    const std::uint64_t qbits = get_u64(data.data() + 16);
    std::memcpy(&file.q, &qbits, 8);
    file.records.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint8_t b = data[24 + i];
        if (b & ~0x07u) throw FormatError("reserved round bits set");
        RoundRecord r;
        r.type = (b & 1u) ? RoundType::Test : RoundType::Gen;
        r.x = (b & 2u) ? 1 : 0;
        r.y = (b & 4u) ? 1 : 0;
        if (r.type == RoundType::Gen && r.x != 0) {
            throw FormatError("generation round with closed shutter");
        }
        file.records.push_back(r);
    }
    return file;
}

void write_cert_jsonl(const std::filesystem::path& path, const std::vector<CertRecord>& records) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    for (const CertRecord& r : records) {
        json j{{"batch", r.batch},         {"n_alpha", r.n_alpha}, {"t_alpha", r.t_alpha},
               {"n_beta", r.n_beta},       {"t_beta", r.t_beta},   {"alpha_hat", r.alpha_hat},
               {"beta_hat", r.beta_hat},   {"g_star", r.g_star},   {"h", r.h},
               {"feasible", r.feasible}};
        f << j.dump() << '\n';
    }
    if (!f) throw IoError("short write to " + path.string());
}

std::vector<CertRecord> read_cert_jsonl(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    std::vector<CertRecord> records;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(std::string("bad cert line: ") + e.what());
        }
        CertRecord r;
        try {
            r.batch = j.at("batch").get<std::uint64_t>();
            r.n_alpha = j.at("n_alpha").get<std::int64_t>();
            r.t_alpha = j.at("t_alpha").get<std::int64_t>();
            r.n_beta = j.at("n_beta").get<std::int64_t>();
            r.t_beta = j.at("t_beta").get<std::int64_t>();
            r.alpha_hat = j.at("alpha_hat").get<double>();
            r.beta_hat = j.at("beta_hat").get<double>();
            r.g_star = j.at("g_star").get<double>();
            r.h = j.at("h").get<double>();
            r.feasible = j.at("feasible").get<bool>();
        } catch (const json::exception& e) {
            throw FormatError(std::string("bad cert record: ") + e.what());
        }
        records.push_back(r);
    }
    return records;
}

void write_bits(const std::filesystem::path& path, const BitVec& bits) {
    const std::vector<std::uint8_t> bytes = bits.to_bytes();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("short write to " + path.string());
}

BitVec read_bits(const std::filesystem::path& path, std::size_t bit_count) {
    const std::vector<std::uint8_t> data = slurp(path);
    if (data.size() != (bit_count + 7) / 8) throw FormatError("bits file length mismatch");
    return BitVec::from_bytes(data, bit_count);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("short write to " + path.string());
}

MixedSource read_gamma_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    std::vector<MixedComponent> comps;
    std::string line;
    while (std::getline(f, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double gamma, p;
        if (ss >> gamma) {
            if (!(ss >> p)) throw FormatError("bad gamma file line: " + line);
            comps.push_back({gamma, p});
        } else {
            std::istringstream check(line);
            std::string token;
            if (check >> token) throw FormatError("bad gamma file line: " + line);
        }
    }
    if (comps.empty()) throw FormatError("gamma file has no components");
    try {
        return MixedSource(std::move(comps));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid mixture: ") + e.what());
    }
}

}  // namespace shuttercert
