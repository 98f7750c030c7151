#pragma once

#include <string>
#include <string_view>

namespace stratforge {

// Hex-encoded SHA-256 of the input bytes (64 lowercase hex chars).
std::string sha256_hex(std::string_view data);

// First n hex chars of sha256_hex(data). n must be <= 64.
std::string sha256_hex_prefix(std::string_view data, std::size_t n);

} // namespace stratforge
