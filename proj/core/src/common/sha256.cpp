#include "didchain/common/sha256.hpp"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace didchain {

static_assert(sizeof(crypto_hash_sha256_state) <= 128);

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) {
      throw std::runtime_error("libsodium initialisation failed");
    }
  });
}

Hash32 sha256(ByteSpan data) {
  ensure_sodium();
  Hash32 out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Sha256::Sha256() {
  ensure_sodium();
  crypto_hash_sha256_init(reinterpret_cast<crypto_hash_sha256_state*>(state_));
}

Sha256& Sha256::update(ByteSpan data) {
  crypto_hash_sha256_update(reinterpret_cast<crypto_hash_sha256_state*>(state_),
                            data.data(), data.size());
  return *this;
}

Hash32 Sha256::finish() {
  Hash32 out;
  crypto_hash_sha256_final(reinterpret_cast<crypto_hash_sha256_state*>(state_),
                           out.data());
  return out;
}

}  // namespace didchain
