#pragma once

#include "didchain/common/canonical_json.hpp"
#include "didchain/common/clock.hpp"
#include "didchain/identity/did.hpp"
#include "didchain/identity/keys.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace didchain::store {

enum class EventType { Produce, Ship, Receive, Manufacture, Withdraw };

std::string_view to_string(EventType type) noexcept;
EventType event_type_from_string(std::string_view text);

struct IssuerSignature {
  identity::Did signer;
  Bytes signature;

  bool operator==(const IssuerSignature&) const = default;
};

// Off-chain metadata of one supply-chain event.
struct EventRecord {
  EventType type = EventType::Produce;
  identity::Did asset;
  identity::Did actor;
  std::optional<identity::Did> counterparty;  // Ship and Receive
  std::vector<identity::Did> compartments;    // Manufacture only
  // Version of each compartment at the moment it was consumed, parallel to
  // compartments. Lets a trace resolve each compartment exactly as consumed.
  std::vector<std::string> compartment_versions;
  std::map<std::string, std::string> attributes;
  Timestamp timestamp;
  std::optional<IssuerSignature> issuer_signature;

  // Throws Error(MalformedRecord) when the type invariants do not hold.
  void validate() const;

  Json to_json() const;
  static EventRecord from_json(const Json& j);

  // Canonical bytes of the whole record, as stored.
  std::string canonical_bytes() const;
  // Canonical bytes without the issuer signature; this is what an issuer signs.
  std::string signing_bytes() const;

  bool operator==(const EventRecord&) const = default;
};

}  // namespace didchain::store
