#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace anep {

// SHA-256 of the input, as lowercase hex. Content digests are the currency
// of the audit trail: every stage record links input and output by digest.
std::string sha256_hex(std::span<const uint8_t> data);
std::string sha256_hex(const std::string& data);

}  // namespace anep
