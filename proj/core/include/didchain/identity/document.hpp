#pragma once

#include "didchain/common/canonical_json.hpp"
#include "didchain/common/clock.hpp"
#include "didchain/identity/did.hpp"
#include "didchain/identity/keys.hpp"

#include <optional>
#include <string>
#include <vector>

namespace didchain::identity {

struct VerificationMethod {
  std::string fragment;  // "key-1" in did:chain:abc#key-1
  Did controller;
  PublicKey public_key{};

  bool operator==(const VerificationMethod&) const = default;
};

enum class ServiceType {
  EventMetadata,          // endpoint: Cid text of an event record
  Compartment,            // endpoint: Did of a consumed compartment
  CompartmentMerkleRoot,  // endpoint: hex Merkle root over compartment Dids
  Status,                 // endpoint: "active", "consumed" or "withdrawn"
  ConsumedBy,             // endpoint: Did of the product that consumed this asset
};

std::string_view to_string(ServiceType type) noexcept;
ServiceType service_type_from_string(std::string_view text);

inline constexpr std::string_view kStatusActive = "active";
inline constexpr std::string_view kStatusWithdrawn = "withdrawn";
inline constexpr std::string_view kStatusConsumed = "consumed";

struct ServiceEntry {
  std::string fragment;
  ServiceType type = ServiceType::EventMetadata;
  std::string endpoint;

  // Throws Error(BadRequest) when the endpoint does not fit the type.
  void validate() const;

  bool operator==(const ServiceEntry&) const = default;
};

struct DocumentMetadata {
  Timestamp created;
  Timestamp updated;
  std::string version_id;
  std::optional<std::string> previous_version_id;
  bool deactivated = false;

  bool operator==(const DocumentMetadata&) const = default;
};

struct DidDocument {
  Did id;
  std::vector<Did> controllers;
  std::vector<VerificationMethod> verification_methods;
  std::vector<ServiceEntry> services;
  DocumentMetadata metadata;

  // id, controller, verificationMethod, service. No metadata.
  Json body_json() const;
  // {"didDocument": body, "didDocumentMetadata": metadata}
  Json resolution_json() const;

  // Parses a resolution_json() value. Throws Error(MalformedRecord).
  static DidDocument from_resolution_json(const Json& j);

  const ServiceEntry* find_service(std::string_view fragment) const;
  std::vector<const ServiceEntry*> services_of(ServiceType type) const;
  bool is_controller(const Did& did) const;
  // Active status entry value, "active" when none is present.
  std::string status() const;

  bool operator==(const DidDocument&) const = default;
};

Json to_json(const VerificationMethod& vm, const Did& subject);
Json to_json(const ServiceEntry& entry, const Did& subject);
Json to_json(const DocumentMetadata& metadata);
DocumentMetadata metadata_from_json(const Json& j);

// Changes requested by a controller. Removals apply before additions, so an
// entry can be replaced in one delta by removing and re-adding its fragment.
struct DocumentDelta {
  std::vector<ServiceEntry> add_services;
  std::vector<std::string> remove_services;
  std::optional<std::vector<Did>> controllers;
  std::optional<std::vector<VerificationMethod>> verification_methods;

  // Throws Error(BadRequest) on a missing removal target, a duplicate
  // fragment, or an empty controller list.
  DidDocument apply_to(const DidDocument& document) const;

  Json to_json(const Did& subject) const;
  static DocumentDelta from_json(const Json& j, const Did& subject);
};

// Block-size accounting for DID writes. A document is charged at least the
// measured on-chain baseline, and each Compartment entry occupies at least one
// fixed-size slot; larger content is charged at its canonical size.
struct DocumentSizing {
  std::size_t baseline_bytes = 1075;          // 1.05 KiB
  std::size_t compartment_entry_bytes = 256;  // 0.25 KiB
};

std::size_t ledger_payload_size(const DidDocument& document, const DocumentSizing& sizing);

}  // namespace didchain::identity
