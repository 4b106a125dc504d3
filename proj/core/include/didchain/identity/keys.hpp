#pragma once

#include "didchain/common/bytes.hpp"
#include "didchain/ledger/ledger.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace didchain::identity {

using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

// Ed25519 key pair derived from a 32-byte seed. The secret half is wiped on
// destruction.
class KeyPair {
 public:
  // Throws Error(BadSeedLength) unless seed is exactly 32 bytes.
  static KeyPair from_seed(ByteSpan seed);

  KeyPair(const KeyPair&) = default;
  KeyPair& operator=(const KeyPair&) = default;
  ~KeyPair();

  const PublicKey& public_key() const noexcept { return public_key_; }
  Signature sign(ByteSpan message) const;

 private:
  KeyPair() = default;

  std::array<std::uint8_t, 64> secret_key_{};
  PublicKey public_key_{};
};

KeyPair generate_keypair(ByteSpan seed);

bool verify_signature(const PublicKey& key, ByteSpan message, ByteSpan signature);

enum class SecretMode { InternalSecret, ClientManagedSecret };

std::string_view to_string(SecretMode mode) noexcept;
// Accepts "internal"/"InternalSecret" and "client-managed"/"ClientManagedSecret".
SecretMode secret_mode_from_string(std::string_view text);

// Named keys owned by one account.
//
// In InternalSecret mode the wallet is held by the service and signs on the
// owner's behalf. In ClientManagedSecret mode the service-side wallet only
// knows public keys; asking it to sign throws ServerSideSigningRefused and
// callers must supply signatures produced elsewhere.
class Wallet {
 public:
  Wallet(ledger::AccountId owner, SecretMode mode) : owner_(std::move(owner)), mode_(mode) {}

  void add_key(const std::string& name, const KeyPair& pair);
  void add_public_key(const std::string& name, const PublicKey& key);

  const ledger::AccountId& owner() const noexcept { return owner_; }
  SecretMode mode() const noexcept { return mode_; }
  bool empty() const noexcept { return keys_.empty(); }

  // Keys in name order.
  std::vector<std::pair<std::string, PublicKey>> public_keys() const;
  // First key in name order. Throws Error(EmptyWallet).
  const std::string& default_key_name() const;

  Signature sign(const std::string& key_name, ByteSpan message) const;
  Signature sign(ByteSpan message) const { return sign(default_key_name(), message); }

 private:
  struct Entry {
    PublicKey public_key{};
    std::optional<KeyPair> pair;
  };

  ledger::AccountId owner_;
  SecretMode mode_;
  std::map<std::string, Entry> keys_;
};

}  // namespace didchain::identity
