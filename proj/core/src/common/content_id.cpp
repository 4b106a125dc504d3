#include "didchain/common/content_id.hpp"

#include "didchain/common/error.hpp"
#include "didchain/common/sha256.hpp"

#include <algorithm>

namespace didchain {
namespace {

constexpr std::uint8_t kSha256Code = 0x12;
constexpr std::uint8_t kDigestLength = 0x20;

}  // namespace

Cid Cid::of(ByteSpan bytes) { return Cid(sha256(bytes)); }

Cid Cid::parse(std::string_view text) {
  Bytes raw;
  try {
    raw = base58_decode(text);
  } catch (const Error&) {
    throw Error(ErrorCode::MalformedRecord, "malformed cid: " + std::string(text));
  }
  if (raw.size() != 34 || raw[0] != kSha256Code || raw[1] != kDigestLength) {
    throw Error(ErrorCode::MalformedRecord, "malformed cid: " + std::string(text));
  }
  Hash32 digest;
  std::copy(raw.begin() + 2, raw.end(), digest.begin());
  return Cid(digest);
}

bool Cid::is_valid_text(std::string_view text) noexcept {
  try {
    return parse(text).text() == text;
  } catch (...) {
    return false;
  }
}

std::string Cid::text() const {
  Bytes raw{kSha256Code, kDigestLength};
  raw.insert(raw.end(), digest_.begin(), digest_.end());
  return base58_encode(raw);
}

}  // namespace didchain
