#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace shuttercert {

// Plain SHA-256, used to fingerprint extractor seeds in manifests.
std::string sha256_hex(std::span<const std::uint8_t> data);

}  // namespace shuttercert
