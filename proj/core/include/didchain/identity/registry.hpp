#pragma once

#include "didchain/common/random.hpp"
#include "didchain/identity/document.hpp"
#include "didchain/ledger/ledger.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

namespace didchain::identity {

struct RegistryConfig {
  std::string method = "chain";
  DocumentSizing sizing;
};

struct CreateOptions {
  // Use this identifier instead of minting one. Must be unused.
  std::optional<Did> did;
  // Controller to install; defaults to the new DID itself.
  std::optional<Did> controller;
};

// One committed version as stored: the canonical bytes covered by the
// version id, and the id itself.
struct StoredVersion {
  std::string bytes;
  std::string version_id;
};

// version_id = hex(SHA-256(bytes || previous_version_id)).
std::string compute_version_id(std::string_view bytes,
                               const std::optional<std::string>& previous_version_id);

// The registrar and resolver. Every mutation is authorised by an Ed25519
// signature over signing_payload(), which binds the proposed document to the
// version it replaces so a signature cannot be replayed on a later version.
//
// Commits pay through the ledger; a rejected mutation never charges a fee and
// never appends a version.
class Registry {
 public:
  Registry(ledger::Ledger& ledger, RegistryConfig config = {},
           std::shared_ptr<Clock> clock = make_system_clock(),
           std::shared_ptr<RandomSource> random = std::make_shared<RandomSource>(0),
           std::optional<std::filesystem::path> data_dir = std::nullopt);

  // base58 of 16 random bytes, never returning an identifier already in use.
  Did mint_did();

  DidDocument create_did(const Wallet& wallet, std::vector<ServiceEntry> services,
                         const ledger::AccountId& payer, const CreateOptions& options = {});

  // Fixture path for participant identities: commits version 1 without a
  // ledger transaction. Idempotent for an identical wallet.
  DidDocument onboard(const Did& did, const Wallet& wallet);

  // Version 1 as create_did() would commit it, without metadata. Lets a
  // caller measure a document before paying for it.
  DidDocument draft(const Did& did, const Wallet& wallet, std::vector<ServiceEntry> services,
                    const std::optional<Did>& controller = std::nullopt) const {
    return build_initial(did, wallet, std::move(services), controller);
  }

  Bytes signing_payload(const Did& did, const DocumentDelta& delta) const;
  Bytes deactivation_payload(const Did& did) const;

  DidDocument update_did(const Did& did, const DocumentDelta& delta, ByteSpan signature,
                         const ledger::AccountId& payer);
  DidDocument handover_controller(const Did& did, const Did& new_controller,
                                  std::vector<VerificationMethod> new_methods,
                                  ByteSpan signature, const ledger::AccountId& payer);
  DidDocument deactivate_did(const Did& did, ByteSpan signature,
                             const ledger::AccountId& payer);

  static DocumentDelta handover_delta(const Did& new_controller,
                                      std::vector<VerificationMethod> new_methods);

  DidDocument resolve(const Did& did) const;
  DidDocument resolve(std::string_view did_text) const;
  DidDocument resolve_version(const Did& did, std::string_view version_id) const;
  std::vector<DocumentMetadata> list_versions(const Did& did) const;
  std::vector<Did> list_dids(const ledger::AccountId& owner) const;
  std::vector<Did> all_dids() const;
  bool contains(const Did& did) const;

  // Raw committed versions, oldest first.
  std::vector<StoredVersion> stored_history(const Did& did) const;

  // Fault injection for integrity tests: replaces the stored bytes of one
  // historical version in memory.
  void tamper_stored_version(const Did& did, std::size_t index, std::string bytes);
  void tamper_version_link(const Did& did, std::size_t index, std::string version_id);

  const RegistryConfig& config() const noexcept { return config_; }
  ledger::Ledger& ledger() const noexcept { return ledger_; }

 private:
  struct Version {
    StoredVersion stored;
    std::optional<DidDocument> parsed;  // empty when stored bytes no longer parse
  };
  struct History {
    std::optional<ledger::AccountId> payer;  // empty for onboarded identities
    std::vector<Version> versions;
  };

  const History& history_or_throw(const Did& did) const;
  const DidDocument& latest(const History& history, const Did& did) const;
  DidDocument commit(const Did& did, DidDocument next, std::optional<ledger::TxKind> kind,
                     const std::optional<ledger::AccountId>& payer, bool is_new);
  void authorize(const DidDocument& current, ByteSpan payload, ByteSpan signature) const;
  DidDocument build_initial(const Did& did, const Wallet& wallet,
                            std::vector<ServiceEntry> services,
                            const std::optional<Did>& controller) const;

  ledger::Ledger& ledger_;
  RegistryConfig config_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<RandomSource> random_;
  std::unique_ptr<Journal> journal_;

  mutable std::shared_mutex mutex_;
  std::map<Did, History> histories_;
  std::vector<Did> creation_order_;
};

// Serialises the part of a version a controller proposes: the document body
// and the deactivation flag. Timestamps are assigned by the registry.
std::string proposed_version_bytes(const DidDocument& document);

}  // namespace didchain::identity
