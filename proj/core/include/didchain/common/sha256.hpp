#pragma once

#include "didchain/common/bytes.hpp"

namespace didchain {

Hash32 sha256(ByteSpan data);

inline Hash32 sha256(std::string_view text) { return sha256(as_bytes(text)); }

// Incremental hashing for concatenations, e.g. H(left || right).
class Sha256 {
 public:
  Sha256();
  Sha256& update(ByteSpan data);
  Sha256& update(std::string_view text) { return update(as_bytes(text)); }
  Hash32 finish();

 private:
  alignas(64) unsigned char state_[128];
};

// libsodium must be initialised once before any crypto call; all entry points
// in this library call it, so callers never need to.
void ensure_sodium();

}  // namespace didchain
