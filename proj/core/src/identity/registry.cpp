#include "didchain/identity/registry.hpp"

#include "didchain/common/error.hpp"
#include "didchain/common/sha256.hpp"

#include <algorithm>
#include <mutex>

namespace didchain::identity {
namespace {

Json stored_json(const DidDocument& doc) {
  Json meta{{"created", doc.metadata.created.iso8601()},
            {"updated", doc.metadata.updated.iso8601()},
            {"deactivated", doc.metadata.deactivated}};
  if (doc.metadata.previous_version_id) {
    meta["previousVersionId"] = *doc.metadata.previous_version_id;
  }
  return Json{{"didDocument", doc.body_json()}, {"didDocumentMetadata", std::move(meta)}};
}

std::optional<DidDocument> parse_stored(const StoredVersion& stored) {
  try {
    auto doc = DidDocument::from_resolution_json(parse_json(stored.bytes));
    doc.metadata.version_id = stored.version_id;
    return doc;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::string compute_version_id(std::string_view bytes,
                               const std::optional<std::string>& previous_version_id) {
  Sha256 h;
  h.update(bytes);
  if (previous_version_id) h.update(*previous_version_id);
  return to_hex(h.finish());
}

std::string proposed_version_bytes(const DidDocument& document) {
  return canonical(
      Json{{"didDocument", document.body_json()}, {"deactivated", document.metadata.deactivated}});
}

Registry::Registry(ledger::Ledger& ledger, RegistryConfig config, std::shared_ptr<Clock> clock,
                   std::shared_ptr<RandomSource> random,
                   std::optional<std::filesystem::path> data_dir)
    : ledger_(ledger),
      config_(std::move(config)),
      clock_(std::move(clock)),
      random_(std::move(random)) {
  if (!data_dir) return;
  journal_ = std::make_unique<Journal>(*data_dir / "registry.ndjson");
  for (const auto& entry : journal_->load()) {
    auto did = Did::parse(entry.at("did").get<std::string>());
    StoredVersion stored{entry.at("bytes").get<std::string>(),
                         entry.at("versionId").get<std::string>()};
    auto [it, inserted] = histories_.try_emplace(did);
    if (inserted) {
      creation_order_.push_back(did);
      if (entry.contains("payer")) it->second.payer = entry["payer"].get<std::string>();
    }
    auto parsed = parse_stored(stored);
    it->second.versions.push_back(Version{std::move(stored), std::move(parsed)});
  }
}

Did Registry::mint_did() {
  for (;;) {
    auto id = base58_encode(random_->bytes(16));
    Did did(config_.method, id);
    std::shared_lock lock(mutex_);
    if (histories_.count(did) == 0) return did;
  }
}

const Registry::History& Registry::history_or_throw(const Did& did) const {
  auto it = histories_.find(did);
  if (it == histories_.end()) {
    throw Error(ErrorCode::NotFound, "unknown did: " + did.text());
  }
  return it->second;
}

const DidDocument& Registry::latest(const History& history, const Did& did) const {
  const auto& parsed = history.versions.back().parsed;
  if (!parsed) {
    throw Error(ErrorCode::IntegrityViolation, "latest version of " + did.text() + " is corrupt");
  }
  return *parsed;
}

DidDocument Registry::build_initial(const Did& did, const Wallet& wallet,
                                    std::vector<ServiceEntry> services,
                                    const std::optional<Did>& controller) const {
  if (wallet.empty()) {
    throw Error(ErrorCode::EmptyWallet, "wallet of " + wallet.owner() + " has no keys");
  }
  DidDocument doc;
  doc.id = did;
  auto owner = controller.value_or(did);
  doc.controllers = {owner};
  int n = 0;
  for (const auto& [name, key] : wallet.public_keys()) {
    doc.verification_methods.push_back({"key-" + std::to_string(++n), owner, key});
  }
  for (const auto& s : services) {
    s.validate();
    if (doc.find_service(s.fragment) != nullptr) {
      throw Error(ErrorCode::BadRequest, "duplicate service entry #" + s.fragment);
    }
    doc.services.push_back(s);
  }
  return doc;
}

DidDocument Registry::create_did(const Wallet& wallet, std::vector<ServiceEntry> services,
                                 const ledger::AccountId& payer, const CreateOptions& options) {
  auto did = options.did ? *options.did : mint_did();
  auto doc = build_initial(did, wallet, std::move(services), options.controller);
  std::unique_lock lock(mutex_);
  if (histories_.count(did) != 0) {
    throw Error(ErrorCode::BadRequest, "did already registered: " + did.text());
  }
  return commit(did, std::move(doc), ledger::TxKind::Create, payer, true);
}

DidDocument Registry::onboard(const Did& did, const Wallet& wallet) {
  auto doc = build_initial(did, wallet, {}, std::nullopt);
  std::unique_lock lock(mutex_);
  if (auto it = histories_.find(did); it != histories_.end()) {
    const auto& existing = latest(it->second, did);
    if (existing.verification_methods != doc.verification_methods) {
      throw Error(ErrorCode::ConfigInvalid, "did " + did.text() + " is onboarded with other keys");
    }
    return existing;
  }
  return commit(did, std::move(doc), std::nullopt, std::nullopt, true);
}

DidDocument Registry::commit(const Did& did, DidDocument next,
                             std::optional<ledger::TxKind> kind,
                             const std::optional<ledger::AccountId>& payer, bool is_new) {
  // Caller holds the unique lock.
  auto now = clock_->now();
  if (is_new) {
    next.metadata.created = now;
    next.metadata.updated = now;
    next.metadata.previous_version_id.reset();
  } else {
    const auto& prev = latest(histories_.at(did), did);
    next.metadata.created = prev.metadata.created;
    next.metadata.updated = std::max(now, prev.metadata.updated);
    next.metadata.previous_version_id = prev.metadata.version_id;
  }

  auto bytes = canonical(stored_json(next));
  if (kind) {
    // Throws before any state changes when the payer cannot commit.
    ledger_.submit(*kind, *payer, ledger_payload_size(next, config_.sizing));
  }
  next.metadata.version_id = compute_version_id(bytes, next.metadata.previous_version_id);

  Json entry{{"did", did.text()}, {"bytes", bytes}, {"versionId", next.metadata.version_id}};
  auto& history = histories_[did];
  if (is_new) {
    creation_order_.push_back(did);
    history.payer = payer;
    if (payer) entry["payer"] = *payer;
  }
  if (journal_) journal_->append(entry);
  history.versions.push_back(Version{StoredVersion{std::move(bytes), next.metadata.version_id}, next});
  return next;
}

void Registry::authorize(const DidDocument& current, ByteSpan payload,
                         ByteSpan signature) const {
  for (const auto& vm : current.verification_methods) {
    if (current.is_controller(vm.controller) &&
        verify_signature(vm.public_key, payload, signature)) {
      return;
    }
  }
  throw Error(ErrorCode::Unauthorized,
              "signature does not match any controller key of " + current.id.text());
}

Bytes Registry::signing_payload(const Did& did, const DocumentDelta& delta) const {
  std::shared_lock lock(mutex_);
  const auto& current = latest(history_or_throw(did), did);
  auto next = delta.apply_to(current);
  next.metadata.deactivated = false;
  auto bytes = proposed_version_bytes(next) + current.metadata.version_id;
  return Bytes(bytes.begin(), bytes.end());
}

Bytes Registry::deactivation_payload(const Did& did) const {
  std::shared_lock lock(mutex_);
  auto next = latest(history_or_throw(did), did);
  next.metadata.deactivated = true;
  auto bytes = proposed_version_bytes(next) + next.metadata.version_id;
  return Bytes(bytes.begin(), bytes.end());
}

DidDocument Registry::update_did(const Did& did, const DocumentDelta& delta,
                                 ByteSpan signature, const ledger::AccountId& payer) {
  std::unique_lock lock(mutex_);
  const auto& current = latest(history_or_throw(did), did);
  if (current.metadata.deactivated) {
    throw Error(ErrorCode::Deactivated, did.text() + " is deactivated");
  }
  auto next = delta.apply_to(current);
  auto payload = proposed_version_bytes(next) + current.metadata.version_id;
  authorize(current, as_bytes(payload), signature);
  return commit(did, std::move(next), ledger::TxKind::Update, payer, false);
}

DocumentDelta Registry::handover_delta(const Did& new_controller,
                                       std::vector<VerificationMethod> new_methods) {
  DocumentDelta delta;
  delta.controllers = std::vector<Did>{new_controller};
  delta.verification_methods = std::move(new_methods);
  return delta;
}

DidDocument Registry::handover_controller(const Did& did, const Did& new_controller,
                                          std::vector<VerificationMethod> new_methods,
                                          ByteSpan signature, const ledger::AccountId& payer) {
  if (new_methods.empty()) {
    throw Error(ErrorCode::BadRequest, "handover needs at least one verification method");
  }
  return update_did(did, handover_delta(new_controller, std::move(new_methods)), signature,
                    payer);
}

DidDocument Registry::deactivate_did(const Did& did, ByteSpan signature,
                                     const ledger::AccountId& payer) {
  std::unique_lock lock(mutex_);
  const auto& current = latest(history_or_throw(did), did);
  if (current.metadata.deactivated) {
    throw Error(ErrorCode::Deactivated, did.text() + " is already deactivated");
  }
  auto next = current;
  next.metadata.deactivated = true;
  auto payload = proposed_version_bytes(next) + current.metadata.version_id;
  authorize(current, as_bytes(payload), signature);
  return commit(did, std::move(next), ledger::TxKind::Deactivate, payer, false);
}

DidDocument Registry::resolve(const Did& did) const {
  std::shared_lock lock(mutex_);
  return latest(history_or_throw(did), did);
}

DidDocument Registry::resolve(std::string_view did_text) const {
  return resolve(Did::parse(did_text));
}

DidDocument Registry::resolve_version(const Did& did, std::string_view version_id) const {
  std::shared_lock lock(mutex_);
  for (const auto& v : history_or_throw(did).versions) {
    if (v.stored.version_id == version_id) {
      if (!v.parsed) {
        throw Error(ErrorCode::IntegrityViolation,
                    "version " + std::string(version_id) + " of " + did.text() + " is corrupt");
      }
      return *v.parsed;
    }
  }
  throw Error(ErrorCode::UnknownVersion,
              "no version " + std::string(version_id) + " of " + did.text());
}

std::vector<DocumentMetadata> Registry::list_versions(const Did& did) const {
  std::shared_lock lock(mutex_);
  std::vector<DocumentMetadata> out;
  for (const auto& v : history_or_throw(did).versions) {
    if (!v.parsed) {
      throw Error(ErrorCode::IntegrityViolation,
                  "version " + v.stored.version_id + " of " + did.text() + " is corrupt");
    }
    out.push_back(v.parsed->metadata);
  }
  return out;
}

std::vector<Did> Registry::list_dids(const ledger::AccountId& owner) const {
  if (!ledger_.has_account(owner)) {
    throw Error(ErrorCode::UnknownAccount, "unknown account: " + owner);
  }
  std::shared_lock lock(mutex_);
  std::vector<Did> out;
  for (const auto& did : creation_order_) {
    if (histories_.at(did).payer == owner) out.push_back(did);
  }
  return out;
}

std::vector<Did> Registry::all_dids() const {
  std::shared_lock lock(mutex_);
  return creation_order_;
}

bool Registry::contains(const Did& did) const {
  std::shared_lock lock(mutex_);
  return histories_.count(did) != 0;
}

std::vector<StoredVersion> Registry::stored_history(const Did& did) const {
  std::shared_lock lock(mutex_);
  std::vector<StoredVersion> out;
  for (const auto& v : history_or_throw(did).versions) out.push_back(v.stored);
  return out;
}

void Registry::tamper_stored_version(const Did& did, std::size_t index, std::string bytes) {
  std::unique_lock lock(mutex_);
  auto& v = histories_.at(did).versions.at(index);
  v.stored.bytes = std::move(bytes);
  v.parsed = parse_stored(v.stored);
}

void Registry::tamper_version_link(const Did& did, std::size_t index, std::string version_id) {
  std::unique_lock lock(mutex_);
  auto& v = histories_.at(did).versions.at(index);
  v.stored.version_id = std::move(version_id);
  v.parsed = parse_stored(v.stored);
}

}  // namespace didchain::identity
