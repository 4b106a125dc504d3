#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace didchain {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;
using Hash32 = std::array<std::uint8_t, 32>;

inline ByteSpan as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteSpan data);
// Throws Error(BadRequest) on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

// Bitcoin alphabet. Leading zero bytes map to leading '1's.
std::string base58_encode(ByteSpan data);
// Throws Error(BadRequest) on characters outside the alphabet.
Bytes base58_decode(std::string_view text);

}  // namespace didchain
