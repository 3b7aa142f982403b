#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace anep {

// Standard base64 (RFC 4648, with padding, no line breaks).
std::string base64_encode(std::span<const uint8_t> data);

}  // namespace anep
