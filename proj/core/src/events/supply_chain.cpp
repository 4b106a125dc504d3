#include "didchain/events/supply_chain.hpp"

#include "didchain/common/error.hpp"
#include "didchain/common/sha256.hpp"
#include "didchain/events/merkle.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace didchain::events {
namespace {

using identity::DocumentDelta;
using identity::ServiceEntry;
using identity::ServiceType;
using store::EventRecord;
using store::EventType;

constexpr std::string_view kStatusFragment = "status";
constexpr std::string_view kConsumedByFragment = "consumed-by";
constexpr std::string_view kMerkleFragment = "compartments-merkle-root";

constexpr std::string_view kRoleNames[] = {"Producer", "Supplier", "Manufacturer", "Retailer",
                                           "Customer"};

ServiceEntry status_entry(std::string_view value) {
  return {std::string(kStatusFragment), ServiceType::Status, std::string(value)};
}

[[noreturn]] void wrong_state(const Did& did, AssetStatus status, Transition t) {
  throw Error(ErrorCode::WrongState, std::string(to_string(t)) + " not allowed: " + did.text() +
                                         " is " + std::string(to_string(status)));
}

}  // namespace

std::string_view to_string(Role role) noexcept {
  return kRoleNames[static_cast<int>(role)];
}

Role role_from_string(std::string_view text) {
  for (int i = 0; i < 5; ++i) {
    if (kRoleNames[i] == text) return static_cast<Role>(i);
  }
  throw Error(ErrorCode::UnknownRole, "unknown role: " + std::string(text));
}

std::string_view to_string(AssetKind kind) noexcept {
  return kind == AssetKind::RawMaterial ? "RawMaterial" : "Product";
}

std::string_view to_string(AssetStatus status) noexcept {
  switch (status) {
    case AssetStatus::Produced: return "Produced";
    case AssetStatus::InTransit: return "InTransit";
    case AssetStatus::Received: return "Received";
    case AssetStatus::Consumed: return "Consumed";
    case AssetStatus::Withdrawn: return "Withdrawn";
  }
  return "?";
}

std::string_view to_string(CommitMode mode) noexcept {
  return mode == CommitMode::ServiceList ? "ServiceList" : "MerkleRoot";
}

CommitMode commit_mode_from_string(std::string_view text) {
  if (text == "ServiceList" || text == "service-list") return CommitMode::ServiceList;
  if (text == "MerkleRoot" || text == "merkle-root" || text == "merkle") {
    return CommitMode::MerkleRoot;
  }
  throw Error(ErrorCode::BadRequest, "unknown commit mode: " + std::string(text));
}

std::string_view to_string(Transition transition) noexcept {
  switch (transition) {
    case Transition::Ship: return "ship";
    case Transition::Receive: return "receive";
    case Transition::Consume: return "consume";
    case Transition::Withdraw: return "withdraw";
  }
  return "?";
}

std::optional<AssetStatus> next_status(AssetStatus current, Transition transition,
                                       TransitionRules rules) {
  const bool held = current == AssetStatus::Produced || current == AssetStatus::Received;
  switch (transition) {
    case Transition::Ship:
      if (held) return AssetStatus::InTransit;
      break;
    case Transition::Receive:
      if (current == AssetStatus::InTransit) return AssetStatus::Received;
      break;
    case Transition::Consume:
      if (held || (rules.lean_receiving && current == AssetStatus::InTransit) ||
          (rules.circular_reuse && current == AssetStatus::Withdrawn)) {
        return AssetStatus::Consumed;
      }
      break;
    case Transition::Withdraw:
      if (held) return AssetStatus::Withdrawn;
      break;
  }
  return std::nullopt;
}

SupplyChain::SupplyChain(EngineConfig config) : config_(std::move(config)) {
  config_.ledger.validate();
  if (config_.clock_start) {
    clock_ = std::make_shared<SteppingClock>(*config_.clock_start);
  } else {
    clock_ = make_system_clock();
  }
  random_ = std::make_shared<RandomSource>(config_.seed);

  const auto& dir = config_.data_dir;
  if (dir) std::filesystem::create_directories(*dir);
  ledger_ = std::make_unique<ledger::Ledger>(config_.ledger, clock_, dir);
  registry_ =
      std::make_unique<identity::Registry>(*ledger_, config_.registry, clock_, random_, dir);
  if (dir) {
    store_ = std::make_unique<store::ObjectStore>(store::ObjectStore::in_directory(*dir / "objects"));
    actor_journal_ = std::make_unique<Journal>(*dir / "actors.ndjson");
    for (const auto& entry : actor_journal_->load()) {
      auto alias = entry.at("alias").get<std::string>();
      auto role = role_from_string(entry.at("role").get<std::string>());
      auto balance = entry.at("balance").get<ledger::TokenAmount>();
      auto mode = identity::secret_mode_from_string(entry.at("mode").get<std::string>());
      identity::Wallet wallet(alias, mode);
      if (entry.contains("seed")) {
        wallet.add_key("key-1", identity::KeyPair::from_seed(from_hex(entry["seed"].get<std::string>())));
      } else {
        auto raw = from_hex(entry.at("publicKey").get<std::string>());
        if (raw.size() != 32) throw Error(ErrorCode::MalformedRecord, "bad actor public key");
        identity::PublicKey key{};
        std::copy(raw.begin(), raw.end(), key.begin());
        wallet.add_public_key("key-1", key);
      }
      auto did = actor_did_for(wallet);
      registry_->onboard(did, wallet);
      ledger_->open_account(alias, balance);
      actors_[alias] = std::make_unique<Actor>(Actor{alias, did, role, std::move(wallet), alias});
    }
    rebuild_index();
  } else {
    store_ = std::make_unique<store::ObjectStore>();
  }
}

Did SupplyChain::actor_did_for(const identity::Wallet& wallet) const {
  Sha256 h;
  h.update("didchain-actor:");
  for (const auto& [name, key] : wallet.public_keys()) {
    h.update(ByteSpan(key.data(), key.size()));
  }
  auto digest = h.finish();
  return Did(config_.registry.method, base58_encode(ByteSpan(digest.data(), 16)));
}

const Actor& SupplyChain::register_actor(const std::string& alias, Role role, ByteSpan seed,
                                         ledger::TokenAmount balance,
                                         identity::SecretMode mode) {
  auto pair = identity::KeyPair::from_seed(seed);
  if (mode == identity::SecretMode::ClientManagedSecret) {
    return register_client_actor(alias, role, pair.public_key(), balance);
  }
  identity::Wallet wallet(alias, mode);
  wallet.add_key("key-1", pair);
  return add_actor(alias, role, std::move(wallet), balance, Json{{"seed", to_hex(seed)}});
}

const Actor& SupplyChain::register_client_actor(const std::string& alias, Role role,
                                                const identity::PublicKey& key,
                                                ledger::TokenAmount balance) {
  identity::Wallet wallet(alias, identity::SecretMode::ClientManagedSecret);
  wallet.add_public_key("key-1", key);
  return add_actor(alias, role, std::move(wallet), balance,
                   Json{{"publicKey", to_hex(ByteSpan(key.data(), key.size()))}});
}

const Actor& SupplyChain::add_actor(const std::string& alias, Role role, identity::Wallet wallet,
                                    ledger::TokenAmount balance, Json journal_entry) {
  if (alias.empty()) throw Error(ErrorCode::ConfigInvalid, "actor alias must not be empty");
  auto did = actor_did_for(wallet);
  std::unique_lock lock(mutex_);
  if (auto it = actors_.find(alias); it != actors_.end()) {
    const auto& existing = *it->second;
    if (existing.did != did || existing.role != role ||
        existing.wallet.mode() != wallet.mode() ||
        ledger_->initial_balance_of(alias) != balance) {
      throw Error(ErrorCode::ConfigInvalid, "actor " + alias + " already registered differently");
    }
    return existing;
  }
  for (const auto& [other, a] : actors_) {
    if (a->did == did) {
      throw Error(ErrorCode::ConfigInvalid, "actors " + other + " and " + alias + " share a key");
    }
  }
  ledger_->open_account(alias, balance);
  registry_->onboard(did, wallet);
  if (actor_journal_) {
    journal_entry["alias"] = alias;
    journal_entry["role"] = std::string(to_string(role));
    journal_entry["balance"] = balance;
    journal_entry["mode"] = std::string(identity::to_string(wallet.mode()));
    actor_journal_->append(journal_entry);
  }
  auto& slot = actors_[alias];
  slot = std::make_unique<Actor>(Actor{alias, did, role, std::move(wallet), alias});
  return *slot;
}

const Actor& SupplyChain::actor(const std::string& alias) const {
  if (const auto* a = find_actor(alias)) return *a;
  throw Error(ErrorCode::UnknownAccount, "unknown actor: " + alias);
}

const Actor* SupplyChain::find_actor(const std::string& alias) const {
  std::shared_lock lock(mutex_);
  auto it = actors_.find(alias);
  return it == actors_.end() ? nullptr : it->second.get();
}

const Actor* SupplyChain::actor_by_did(const Did& did) const {
  std::shared_lock lock(mutex_);
  for (const auto& [alias, a] : actors_) {
    if (a->did == did) return a.get();
  }
  return nullptr;
}

std::vector<const Actor*> SupplyChain::actors() const {
  std::shared_lock lock(mutex_);
  std::vector<const Actor*> out;
  for (const auto& [alias, a] : actors_) out.push_back(a.get());
  return out;
}

const AssetState& SupplyChain::state_or_throw(const Did& asset) const {
  auto it = assets_.find(asset);
  if (it == assets_.end()) throw Error(ErrorCode::NotFound, "unknown asset: " + asset.text());
  return it->second;
}

identity::DidDocument SupplyChain::controlled_document(const Actor& actor,
                                                       const Did& asset) const {
  auto doc = registry_->resolve(asset);
  if (doc.metadata.deactivated) {
    throw Error(ErrorCode::Deactivated, asset.text() + " is deactivated");
  }
  if (!doc.is_controller(actor.did)) {
    throw Error(ErrorCode::NotController, actor.alias + " does not control " + asset.text());
  }
  return doc;
}

identity::DidDocument SupplyChain::signed_update(const Actor& actor, const Did& did,
                                                 const DocumentDelta& delta) {
  auto payload = registry_->signing_payload(did, delta);
  auto signature = actor.wallet.sign(payload);
  return registry_->update_did(did, delta, signature, actor.account);
}

std::vector<identity::VerificationMethod> SupplyChain::methods_for(const Actor& actor) const {
  std::vector<identity::VerificationMethod> out;
  int n = 0;
  for (const auto& [name, key] : actor.wallet.public_keys()) {
    out.push_back({"key-" + std::to_string(++n), actor.did, key});
  }
  return out;
}

void SupplyChain::check_payload(const identity::DidDocument& draft) const {
  auto size = identity::ledger_payload_size(draft, config_.registry.sizing);
  if (size > config_.ledger.block_size_limit) {
    throw Error(ErrorCode::PayloadTooLarge,
                "document of " + std::to_string(size) + " bytes exceeds block limit of " +
                    std::to_string(config_.ledger.block_size_limit));
  }
}

std::string SupplyChain::next_event_fragment(const AssetState& state) {
  return "event-" + std::to_string(state.event_cids.size() + 1);
}

namespace {

void require_active_actor(const identity::Registry& registry, const Actor& actor) {
  if (registry.resolve(actor.did).metadata.deactivated) {
    throw Error(ErrorCode::Deactivated, "actor " + actor.alias + " is deactivated");
  }
}

void require_server_signing(const Actor& actor) {
  if (actor.wallet.mode() != identity::SecretMode::InternalSecret) {
    throw Error(ErrorCode::ServerSideSigningRefused,
                actor.alias + " manages its own keys; the service cannot sign for it");
  }
}

}  // namespace

ProduceResult SupplyChain::produce(const Actor& actor, const Attributes& attributes) {
  std::unique_lock lock(mutex_);
  if (actor.role != Role::Producer) {
    throw Error(ErrorCode::WrongRole, actor.alias + " is a " + std::string(to_string(actor.role)) +
                                          ", not a Producer");
  }
  require_active_actor(*registry_, actor);

  auto did = registry_->mint_did();
  EventRecord record;
  record.type = EventType::Produce;
  record.asset = did;
  record.actor = actor.did;
  record.attributes = attributes;
  record.timestamp = clock_->now();
  record.validate();
  auto cid = Cid::of(record.canonical_bytes());

  std::vector<ServiceEntry> services{{"event-1", ServiceType::EventMetadata, cid.text()},
                                     status_entry(identity::kStatusActive)};
  check_payload(registry_->draft(did, actor.wallet, services, actor.did));
  ledger_->check_affordable(actor.account, ledger_->config().fees.create_fee);

  store_->put(record);
  registry_->create_did(actor.wallet, std::move(services), actor.account,
                        identity::CreateOptions{did, actor.did});

  AssetState state;
  state.did = did;
  state.kind = AssetKind::RawMaterial;
  state.current_controller = actor.did;
  state.status = AssetStatus::Produced;
  state.event_cids = {cid};
  assets_[did] = std::move(state);
  return {did, cid};
}

Cid SupplyChain::ship(const Actor& actor, const Did& asset, const Actor& recipient) {
  std::unique_lock lock(mutex_);
  const auto& state = state_or_throw(asset);
  require_active_actor(*registry_, actor);
  require_active_actor(*registry_, recipient);
  controlled_document(actor, asset);
  auto next = next_status(state.status, Transition::Ship);
  if (!next) wrong_state(asset, state.status, Transition::Ship);
  require_server_signing(actor);
  ledger_->check_affordable(actor.account, ledger_->config().fees.update_fee);

  EventRecord record;
  record.type = EventType::Ship;
  record.asset = asset;
  record.actor = actor.did;
  record.counterparty = recipient.did;
  record.timestamp = clock_->now();
  auto cid = store_->put(record);

  auto delta = identity::Registry::handover_delta(recipient.did, methods_for(recipient));
  delta.add_services.push_back(
      {next_event_fragment(state), ServiceType::EventMetadata, cid.text()});
  signed_update(actor, asset, delta);

  auto& s = assets_[asset];
  s.status = *next;
  s.current_controller = recipient.did;
  s.shipped_by = actor.did;
  s.event_cids.push_back(cid);
  return cid;
}

Cid SupplyChain::receive(const Actor& actor, const Did& asset) {
  std::unique_lock lock(mutex_);
  const auto& state = state_or_throw(asset);
  require_active_actor(*registry_, actor);
  controlled_document(actor, asset);
  auto next = next_status(state.status, Transition::Receive);
  if (!next) wrong_state(asset, state.status, Transition::Receive);
  require_server_signing(actor);
  ledger_->check_affordable(actor.account, ledger_->config().fees.update_fee);

  EventRecord record;
  record.type = EventType::Receive;
  record.asset = asset;
  record.actor = actor.did;
  record.counterparty = state.shipped_by.value_or(actor.did);
  record.timestamp = clock_->now();
  auto cid = store_->put(record);

  DocumentDelta delta;
  delta.add_services.push_back(
      {next_event_fragment(state), ServiceType::EventMetadata, cid.text()});
  signed_update(actor, asset, delta);

  auto& s = assets_[asset];
  s.status = *next;
  s.event_cids.push_back(cid);
  return cid;
}

ManufactureResult SupplyChain::manufacture(const Actor& actor, const std::vector<Did>& compartments,
                                           const Attributes& attributes,
                                           ManufactureOptions options) {
  std::unique_lock lock(mutex_);
  if (actor.role != Role::Manufacturer) {
    throw Error(ErrorCode::WrongRole, actor.alias + " is a " + std::string(to_string(actor.role)) +
                                          ", not a Manufacturer");
  }
  if (compartments.empty()) {
    throw Error(ErrorCode::EmptyInput, "manufacture needs at least one compartment");
  }
  if (config_.max_compartments_per_tx && compartments.size() > *config_.max_compartments_per_tx) {
    throw Error(ErrorCode::CompartmentLimitExceeded,
                std::to_string(compartments.size()) + " compartments exceed the limit of " +
                    std::to_string(*config_.max_compartments_per_tx) + " per transaction");
  }
  require_active_actor(*registry_, actor);

  TransitionRules rules{options.lean_receiving, config_.circular_reuse};
  std::vector<Did> distinct;
  std::map<Did, std::string> pinned;
  for (const auto& c : compartments) {
    if (pinned.count(c) != 0) continue;
    const auto& state = state_or_throw(c);
    auto doc = controlled_document(actor, c);
    if (!next_status(state.status, Transition::Consume, rules)) {
      wrong_state(c, state.status, Transition::Consume);
    }
    pinned[c] = doc.metadata.version_id;
    distinct.push_back(c);
  }
  if (!options.lean_receiving) require_server_signing(actor);

  auto did = registry_->mint_did();
  EventRecord record;
  record.type = EventType::Manufacture;
  record.asset = did;
  record.actor = actor.did;
  record.compartments = compartments;
  for (const auto& c : compartments) record.compartment_versions.push_back(pinned[c]);
  record.attributes = attributes;
  record.timestamp = clock_->now();
  record.validate();
  auto cid = Cid::of(record.canonical_bytes());

  std::vector<ServiceEntry> services{{"event-1", ServiceType::EventMetadata, cid.text()},
                                     status_entry(identity::kStatusActive)};
  if (options.commit_mode == CommitMode::ServiceList) {
    for (std::size_t i = 0; i < compartments.size(); ++i) {
      services.push_back({"compartment-" + std::to_string(i + 1), ServiceType::Compartment,
                          compartments[i].text()});
    }
  } else {
    auto tree = build_compartment_merkle(compartments);
    services.push_back({std::string(kMerkleFragment), ServiceType::CompartmentMerkleRoot,
                        to_hex(tree.root)});
  }
  check_payload(registry_->draft(did, actor.wallet, services, actor.did));
  const auto& fees = ledger_->config().fees;
  auto total = fees.create_fee;
  if (!options.lean_receiving) total += fees.update_fee * distinct.size();
  ledger_->check_affordable(actor.account, total);

  store_->put(record);
  registry_->create_did(actor.wallet, std::move(services), actor.account,
                        identity::CreateOptions{did, actor.did});
  if (!options.lean_receiving) {
    for (const auto& c : distinct) {
      DocumentDelta delta;
      delta.remove_services.push_back(std::string(kStatusFragment));
      delta.add_services.push_back(status_entry(identity::kStatusConsumed));
      delta.add_services.push_back(
          {std::string(kConsumedByFragment), ServiceType::ConsumedBy, did.text()});
      signed_update(actor, c, delta);
    }
  }

  for (const auto& c : distinct) {
    auto& s = assets_[c];
    s.status = AssetStatus::Consumed;
    s.consumed_by = did;
  }
  AssetState state;
  state.did = did;
  state.kind = AssetKind::Product;
  state.current_controller = actor.did;
  state.status = AssetStatus::Produced;
  state.event_cids = {cid};
  assets_[did] = std::move(state);
  return {did, cid};
}

Cid SupplyChain::withdraw(const Actor& actor, const Did& asset, const std::string& reason,
                          bool deactivate) {
  std::unique_lock lock(mutex_);
  const auto& state = state_or_throw(asset);
  require_active_actor(*registry_, actor);
  controlled_document(actor, asset);
  auto next = next_status(state.status, Transition::Withdraw);
  if (!next) wrong_state(asset, state.status, Transition::Withdraw);
  require_server_signing(actor);
  const auto& fees = ledger_->config().fees;
  ledger_->check_affordable(actor.account,
                            fees.update_fee + (deactivate ? fees.deactivate_fee : 0));

  EventRecord record;
  record.type = EventType::Withdraw;
  record.asset = asset;
  record.actor = actor.did;
  if (!reason.empty()) record.attributes["reason"] = reason;
  record.timestamp = clock_->now();
  auto cid = store_->put(record);

  DocumentDelta delta;
  delta.remove_services.push_back(std::string(kStatusFragment));
  delta.add_services.push_back(status_entry(identity::kStatusWithdrawn));
  delta.add_services.push_back(
      {next_event_fragment(state), ServiceType::EventMetadata, cid.text()});
  signed_update(actor, asset, delta);
  if (deactivate) {
    auto payload = registry_->deactivation_payload(asset);
    registry_->deactivate_did(asset, actor.wallet.sign(payload), actor.account);
  }

  auto& s = assets_[asset];
  s.status = *next;
  s.deactivated = deactivate;
  s.event_cids.push_back(cid);
  return cid;
}

AssetState SupplyChain::asset_state(const Did& asset) const {
  std::shared_lock lock(mutex_);
  return state_or_throw(asset);
}

std::optional<AssetState> SupplyChain::find_asset(const Did& asset, const ReadLock&) const {
  auto it = assets_.find(asset);
  if (it == assets_.end()) return std::nullopt;
  return it->second;
}

bool SupplyChain::is_asset(const Did& did) const {
  std::shared_lock lock(mutex_);
  return assets_.count(did) != 0;
}

std::vector<AssetState> SupplyChain::assets() const {
  std::shared_lock lock(mutex_);
  std::vector<AssetState> out;
  for (const auto& did : registry_->all_dids()) {
    if (auto it = assets_.find(did); it != assets_.end()) out.push_back(it->second);
  }
  return out;
}

void SupplyChain::rebuild_index() {
  std::set<Did> actor_dids;
  for (const auto& [alias, a] : actors_) actor_dids.insert(a->did);

  std::vector<std::pair<Did, std::vector<Did>>> products;
  for (const auto& did : registry_->all_dids()) {
    if (actor_dids.count(did) != 0) continue;
    auto doc = registry_->resolve(did);
    auto entries = doc.services_of(ServiceType::EventMetadata);
    if (entries.empty()) continue;

    AssetState state;
    state.did = did;
    for (const auto* e : entries) state.event_cids.push_back(Cid::parse(e->endpoint));
    auto first = store_->get(state.event_cids.front());
    auto last = state.event_cids.size() == 1 ? first : store_->get(state.event_cids.back());
    state.kind = first.type == EventType::Manufacture ? AssetKind::Product : AssetKind::RawMaterial;
    state.current_controller = doc.controllers.front();
    state.deactivated = doc.metadata.deactivated;
    switch (last.type) {
      case EventType::Ship:
        state.status = AssetStatus::InTransit;
        state.shipped_by = last.actor;
        break;
      case EventType::Receive:
        state.status = AssetStatus::Received;
        state.shipped_by = last.counterparty;
        break;
      case EventType::Withdraw:
        state.status = AssetStatus::Withdrawn;
        break;
      default:
        state.status = AssetStatus::Produced;
    }
    if (const auto* consumed = doc.find_service(kConsumedByFragment)) {
      state.status = AssetStatus::Consumed;
      state.consumed_by = Did::parse(consumed->endpoint);
    }
    if (state.kind == AssetKind::Product) products.emplace_back(did, first.compartments);
    assets_[did] = std::move(state);
  }
  // Compartments consumed with lean receiving carry no back-link; their
  // consumption is recorded only in the product's Manufacture record.
  for (const auto& [product, compartments] : products) {
    for (const auto& c : compartments) {
      auto it = assets_.find(c);
      if (it != assets_.end() && it->second.status != AssetStatus::Consumed) {
        it->second.status = AssetStatus::Consumed;
        it->second.consumed_by = product;
      }
    }
  }
}

}  // namespace didchain::events
