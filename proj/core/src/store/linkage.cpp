#include "didchain/store/linkage.hpp"

#include "didchain/common/error.hpp"

#include <algorithm>

namespace didchain::store {

using identity::DidDocument;
using identity::ServiceType;

std::string_view to_string(LinkageVerdict verdict) noexcept {
  switch (verdict) {
    case LinkageVerdict::TrustedByLinkage: return "trusted-by-linkage";
    case LinkageVerdict::TrustedBySignature: return "trusted";
    case LinkageVerdict::Untrusted: return "untrusted";
  }
  return "untrusted";
}

namespace {

bool links(const DidDocument& doc, const std::string& cid_text) {
  for (const auto* s : doc.services_of(ServiceType::EventMetadata)) {
    if (s->endpoint == cid_text) return true;
  }
  return false;
}

bool signature_valid(const EventRecord& record, const identity::Registry& registry) {
  const auto& sig = record.issuer_signature;
  if (!sig || sig->signer != record.actor) return false;
  DidDocument issuer;
  try {
    issuer = registry.resolve(sig->signer);
  } catch (const Error&) {
    return false;
  }
  auto message = record.signing_bytes();
  return std::any_of(issuer.verification_methods.begin(), issuer.verification_methods.end(),
                     [&](const identity::VerificationMethod& vm) {
                       return issuer.is_controller(vm.controller) &&
                              identity::verify_signature(vm.public_key, as_bytes(message),
                                                         sig->signature);
                     });
}

}  // namespace

LinkageReport verify_linkage(const Cid& record_cid, const DidDocument& document,
                             const identity::Registry& registry, const ObjectStore& store) {
  LinkageReport report;
  auto record = store.get(record_cid);
  auto cid_text = record_cid.text();

  if (!links(document, cid_text)) {
    report.reason = "document does not reference the record";
    return report;
  }
  report.linked = true;

  // Find the version that introduced the link; its authorisers are the
  // controllers of the version before it.
  std::vector<identity::Did> authorisers;
  auto versions = registry.list_versions(document.id);
  std::optional<DidDocument> previous;
  for (const auto& meta : versions) {
    auto doc = registry.resolve_version(document.id, meta.version_id);
    if (links(doc, cid_text)) {
      authorisers = previous ? previous->controllers : doc.controllers;
      report.link_version_id = meta.version_id;
      break;
    }
    previous = std::move(doc);
  }

  bool issuer_is_linker =
      std::find(authorisers.begin(), authorisers.end(), record.actor) != authorisers.end();
  if (issuer_is_linker) {
    report.verdict = LinkageVerdict::TrustedByLinkage;
    report.reason = "linked by the issuing controller";
    return report;
  }

  report.signature_required = true;
  if (signature_valid(record, registry)) {
    report.verdict = LinkageVerdict::TrustedBySignature;
    report.reason = "issuer differs from linking controller; issuer signature valid";
  } else {
    report.verdict = LinkageVerdict::Untrusted;
    report.reason = record.issuer_signature
                        ? "issuer differs from linking controller; issuer signature invalid"
                        : "issuer differs from linking controller; issuer signature missing";
  }
  return report;
}

}  // namespace didchain::store
