#pragma once

#include "didchain/common/content_id.hpp"
#include "didchain/common/random.hpp"
#include "didchain/identity/registry.hpp"
#include "didchain/ledger/ledger.hpp"
#include "didchain/store/object_store.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace didchain::events {

using identity::Did;
using Attributes = std::map<std::string, std::string>;

enum class Role { Producer, Supplier, Manufacturer, Retailer, Customer };
enum class AssetKind { RawMaterial, Product };
enum class AssetStatus { Produced, InTransit, Received, Consumed, Withdrawn };
enum class CommitMode { ServiceList, MerkleRoot };
enum class Transition { Ship, Receive, Consume, Withdraw };

std::string_view to_string(Role role) noexcept;
// Throws Error(UnknownRole).
Role role_from_string(std::string_view text);
std::string_view to_string(AssetKind kind) noexcept;
std::string_view to_string(AssetStatus status) noexcept;
std::string_view to_string(CommitMode mode) noexcept;
CommitMode commit_mode_from_string(std::string_view text);
std::string_view to_string(Transition transition) noexcept;

struct TransitionRules {
  // Compartments may be consumed while still in transit to the manufacturer;
  // the Manufacture record then stands in for their receipt.
  bool lean_receiving = false;
  // Withdrawn (not deactivated) assets may be consumed again.
  bool circular_reuse = false;
};

// Per-asset lifecycle: Produce (Ship Receive)* [Consume | Withdraw]?. A
// Manufacture event starts a product's lifecycle in state Produced. Returns
// nullopt for an illegal transition.
std::optional<AssetStatus> next_status(AssetStatus current, Transition transition,
                                       TransitionRules rules = {});

struct Actor {
  std::string alias;
  Did did;
  Role role = Role::Producer;
  identity::Wallet wallet;
  ledger::AccountId account;
};

struct AssetState {
  Did did;
  AssetKind kind = AssetKind::RawMaterial;
  Did current_controller;
  AssetStatus status = AssetStatus::Produced;
  std::vector<Cid> event_cids;  // EventMetadata order
  std::optional<Did> consumed_by;
  std::optional<Did> shipped_by;  // sender of the pending or last shipment
  bool deactivated = false;
};

struct EngineConfig {
  ledger::LedgerConfig ledger;
  identity::RegistryConfig registry;
  // The hosted credential API rejected 40 or more compartments per
  // transaction; set to 39 to reproduce that limit. Off by default.
  std::optional<std::size_t> max_compartments_per_tx;
  bool circular_reuse = false;
  std::uint64_t seed = 0;
  // Deterministic clock start; the system clock is used when unset.
  std::optional<Timestamp> clock_start;
  // Journals and the object store live here when set; in memory otherwise.
  std::optional<std::filesystem::path> data_dir;
};

struct ManufactureOptions {
  CommitMode commit_mode = CommitMode::ServiceList;
  bool lean_receiving = false;
};

struct ProduceResult {
  Did did;
  Cid cid;
};

using ManufactureResult = ProduceResult;

// The supply-chain engine: every event stores an EventRecord and commits the
// matching DID operations. Each operation validates all preconditions and
// affordability before its first write, so a failed event changes nothing.
// Mutations are serialized; reads share a lock and see a consistent snapshot.
class SupplyChain {
 public:
  explicit SupplyChain(EngineConfig config = {});

  // Opens the actor's pre-funded account and onboards its DID (no ledger
  // fee). The actor DID is derived from its public key, so re-registering
  // the same seed is idempotent.
  const Actor& register_actor(const std::string& alias, Role role, ByteSpan seed,
                              ledger::TokenAmount balance,
                              identity::SecretMode mode = identity::SecretMode::InternalSecret);
  // Client-managed actor known to the service by its public key only.
  const Actor& register_client_actor(const std::string& alias, Role role,
                                     const identity::PublicKey& key, ledger::TokenAmount balance);
  const Actor& actor(const std::string& alias) const;
  const Actor* find_actor(const std::string& alias) const;
  const Actor* actor_by_did(const Did& did) const;
  std::vector<const Actor*> actors() const;

  ProduceResult produce(const Actor& actor, const Attributes& attributes = {});
  Cid ship(const Actor& actor, const Did& asset, const Actor& recipient);
  Cid receive(const Actor& actor, const Did& asset);
  ManufactureResult manufacture(const Actor& actor, const std::vector<Did>& compartments,
                                const Attributes& attributes = {},
                                ManufactureOptions options = {});
  Cid withdraw(const Actor& actor, const Did& asset, const std::string& reason,
               bool deactivate);

  AssetState asset_state(const Did& asset) const;
  bool is_asset(const Did& did) const;
  std::vector<AssetState> assets() const;

  using ReadLock = std::shared_lock<std::shared_mutex>;

  // Shared lock for readers that need a consistent multi-call snapshot.
  ReadLock read_lock() const { return ReadLock(mutex_); }
  // Index lookup for a caller already holding read_lock().
  std::optional<AssetState> find_asset(const Did& asset, const ReadLock& held) const;

  const EngineConfig& config() const noexcept { return config_; }
  ledger::Ledger& ledger() noexcept { return *ledger_; }
  const ledger::Ledger& ledger() const noexcept { return *ledger_; }
  identity::Registry& registry() noexcept { return *registry_; }
  const identity::Registry& registry() const noexcept { return *registry_; }
  store::ObjectStore& store() noexcept { return *store_; }
  const store::ObjectStore& store() const noexcept { return *store_; }
  Clock& clock() noexcept { return *clock_; }

 private:
  const AssetState& state_or_throw(const Did& asset) const;
  identity::DidDocument controlled_document(const Actor& actor, const Did& asset) const;
  identity::DidDocument signed_update(const Actor& actor, const Did& did,
                                      const identity::DocumentDelta& delta);
  std::vector<identity::VerificationMethod> methods_for(const Actor& actor) const;
  void check_payload(const identity::DidDocument& draft) const;
  static std::string next_event_fragment(const AssetState& state);
  void rebuild_index();
  Did actor_did_for(const identity::Wallet& wallet) const;
  const Actor& add_actor(const std::string& alias, Role role, identity::Wallet wallet,
                         ledger::TokenAmount balance, Json journal_entry);

  EngineConfig config_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<RandomSource> random_;
  std::unique_ptr<ledger::Ledger> ledger_;
  std::unique_ptr<identity::Registry> registry_;
  std::unique_ptr<store::ObjectStore> store_;
  std::unique_ptr<Journal> actor_journal_;

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::unique_ptr<Actor>> actors_;
  std::map<Did, AssetState> assets_;
};

}  // namespace didchain::events
