#include "didchain/identity/keys.hpp"

#include "didchain/common/error.hpp"
#include "didchain/common/sha256.hpp"

#include <sodium.h>

namespace didchain::identity {

KeyPair KeyPair::from_seed(ByteSpan seed) {
  if (seed.size() != crypto_sign_SEEDBYTES) {
    throw Error(ErrorCode::BadSeedLength,
                "seed must be 32 bytes, got " + std::to_string(seed.size()));
  }
  ensure_sodium();
  KeyPair pair;
  crypto_sign_seed_keypair(pair.public_key_.data(), pair.secret_key_.data(), seed.data());
  return pair;
}

KeyPair::~KeyPair() { sodium_memzero(secret_key_.data(), secret_key_.size()); }

Signature KeyPair::sign(ByteSpan message) const {
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       secret_key_.data());
  return sig;
}

KeyPair generate_keypair(ByteSpan seed) { return KeyPair::from_seed(seed); }

bool verify_signature(const PublicKey& key, ByteSpan message, ByteSpan signature) {
  if (signature.size() != crypto_sign_BYTES) return false;
  ensure_sodium();
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     key.data()) == 0;
}

std::string_view to_string(SecretMode mode) noexcept {
  return mode == SecretMode::InternalSecret ? "InternalSecret" : "ClientManagedSecret";
}

SecretMode secret_mode_from_string(std::string_view text) {
  if (text == "internal" || text == "InternalSecret") return SecretMode::InternalSecret;
  if (text == "client-managed" || text == "ClientManagedSecret") {
    return SecretMode::ClientManagedSecret;
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown secret mode: " + std::string(text));
}

void Wallet::add_key(const std::string& name, const KeyPair& pair) {
  keys_.insert_or_assign(name, Entry{pair.public_key(), pair});
}

void Wallet::add_public_key(const std::string& name, const PublicKey& key) {
  keys_.insert_or_assign(name, Entry{key, std::nullopt});
}

std::vector<std::pair<std::string, PublicKey>> Wallet::public_keys() const {
  std::vector<std::pair<std::string, PublicKey>> out;
  for (const auto& [name, entry] : keys_) out.emplace_back(name, entry.public_key);
  return out;
}

const std::string& Wallet::default_key_name() const {
  if (keys_.empty()) throw Error(ErrorCode::EmptyWallet, "wallet of " + owner_ + " has no keys");
  return keys_.begin()->first;
}

Signature Wallet::sign(const std::string& key_name, ByteSpan message) const {
  auto it = keys_.find(key_name);
  if (it == keys_.end()) {
    throw Error(ErrorCode::EmptyWallet, "wallet of " + owner_ + " has no key " + key_name);
  }
  if (!it->second.pair) {
    throw Error(ErrorCode::ServerSideSigningRefused,
                "key " + key_name + " of " + owner_ + " is client-managed");
  }
  return it->second.pair->sign(message);
}

}  // namespace didchain::identity
