#pragma once

#include "didchain/common/bytes.hpp"

#include <compare>
#include <string>
#include <string_view>

namespace didchain {

// Content identifier: SHA-256 digest of the stored bytes. The text form is
// base58(0x12 || 0x20 || digest), i.e. a sha2-256 multihash.
class Cid {
 public:
  Cid() = default;
  explicit Cid(const Hash32& digest) : digest_(digest) {}

  static Cid of(ByteSpan bytes);
  static Cid of(std::string_view bytes) { return of(as_bytes(bytes)); }
  // Throws Error(MalformedRecord) unless text decodes to exactly 34 bytes
  // with the 0x12 0x20 prefix.
  static Cid parse(std::string_view text);
  static bool is_valid_text(std::string_view text) noexcept;

  const Hash32& digest() const noexcept { return digest_; }
  std::string text() const;

  auto operator<=>(const Cid&) const = default;

 private:
  Hash32 digest_{};
};

}  // namespace didchain
