#pragma once

#include "didchain/common/content_id.hpp"
#include "didchain/identity/registry.hpp"
#include "didchain/store/object_store.hpp"

#include <optional>
#include <string>

namespace didchain::store {

enum class LinkageVerdict {
  // Linked from the asset's document by the controller that issued it; the
  // link alone authenticates the record.
  TrustedByLinkage,
  // Issued by someone other than the linking controller and carrying a valid
  // issuer signature.
  TrustedBySignature,
  Untrusted,
};

std::string_view to_string(LinkageVerdict verdict) noexcept;

struct LinkageReport {
  LinkageVerdict verdict = LinkageVerdict::Untrusted;
  bool linked = false;
  bool signature_required = false;
  // Version that first committed the link, when linked.
  std::optional<std::string> link_version_id;
  std::string reason;
};

// Decides whether a stored event record needs an issuer signature. Authority
// is evaluated at link-commit time: the controllers of the version preceding
// the one that added the link (the signers of that mutation), or of version 1
// when the link was present at creation.
LinkageReport verify_linkage(const Cid& record_cid, const identity::DidDocument& document,
                             const identity::Registry& registry, const ObjectStore& store);

}  // namespace didchain::store
