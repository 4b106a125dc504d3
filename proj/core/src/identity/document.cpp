#include "didchain/identity/document.hpp"

#include "didchain/common/content_id.hpp"
#include "didchain/common/error.hpp"

#include <algorithm>
#include <set>

namespace didchain::identity {
namespace {

constexpr std::string_view kVerificationKeyType = "Ed25519VerificationKey2018";

std::string fragment_of(const std::string& url, const Did& subject) {
  auto prefix = subject.text() + "#";
  if (url.size() <= prefix.size() || url.compare(0, prefix.size(), prefix) != 0) {
    throw Error(ErrorCode::MalformedRecord, "id " + url + " is not a fragment of " + subject.text());
  }
  return url.substr(prefix.size());
}

VerificationMethod vm_from_json(const Json& j, const Did& subject) {
  if (j.at("type").get<std::string>() != kVerificationKeyType) {
    throw Error(ErrorCode::MalformedRecord, "unsupported verification method type");
  }
  VerificationMethod vm;
  vm.fragment = fragment_of(j.at("id").get<std::string>(), subject);
  vm.controller = Did::parse(j.at("controller").get<std::string>());
  auto key = base58_decode(j.at("publicKeyBase58").get<std::string>());
  if (key.size() != vm.public_key.size()) {
    throw Error(ErrorCode::MalformedRecord, "public key must be 32 bytes");
  }
  std::copy(key.begin(), key.end(), vm.public_key.begin());
  return vm;
}

ServiceEntry service_from_json(const Json& j, const Did& subject) {
  ServiceEntry entry;
  entry.fragment = fragment_of(j.at("id").get<std::string>(), subject);
  entry.type = service_type_from_string(j.at("type").get<std::string>());
  entry.endpoint = j.at("serviceEndpoint").get<std::string>();
  return entry;
}

}  // namespace

std::string_view to_string(ServiceType type) noexcept {
  switch (type) {
    case ServiceType::EventMetadata: return "EventMetadata";
    case ServiceType::Compartment: return "Compartment";
    case ServiceType::CompartmentMerkleRoot: return "CompartmentMerkleRoot";
    case ServiceType::Status: return "Status";
    case ServiceType::ConsumedBy: return "ConsumedBy";
  }
  return "EventMetadata";
}

ServiceType service_type_from_string(std::string_view text) {
  for (auto t : {ServiceType::EventMetadata, ServiceType::Compartment,
                 ServiceType::CompartmentMerkleRoot, ServiceType::Status,
                 ServiceType::ConsumedBy}) {
    if (to_string(t) == text) return t;
  }
  throw Error(ErrorCode::BadRequest, "unknown service type: " + std::string(text));
}

void ServiceEntry::validate() const {
  if (fragment.empty()) {
    throw Error(ErrorCode::BadRequest, "service entry needs an id fragment");
  }
  bool ok = true;
  switch (type) {
    case ServiceType::EventMetadata:
      ok = Cid::is_valid_text(endpoint);
      break;
    case ServiceType::Compartment:
    case ServiceType::ConsumedBy:
      ok = Did::is_valid(endpoint);
      break;
    case ServiceType::CompartmentMerkleRoot:
      ok = endpoint.size() == 64 &&
           std::all_of(endpoint.begin(), endpoint.end(), [](char c) {
             return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
      break;
    case ServiceType::Status:
      ok = endpoint == kStatusActive || endpoint == kStatusConsumed ||
           endpoint == kStatusWithdrawn;
      break;
  }
  if (!ok) {
    throw Error(ErrorCode::BadRequest, std::string("invalid endpoint for ") +
                                           std::string(to_string(type)) + " entry: " + endpoint);
  }
}

Json to_json(const VerificationMethod& vm, const Did& subject) {
  return Json{{"id", subject.text() + "#" + vm.fragment},
              {"type", kVerificationKeyType},
              {"controller", vm.controller.text()},
              {"publicKeyBase58", base58_encode(vm.public_key)}};
}

Json to_json(const ServiceEntry& entry, const Did& subject) {
  return Json{{"id", subject.text() + "#" + entry.fragment},
              {"type", to_string(entry.type)},
              {"serviceEndpoint", entry.endpoint}};
}

Json to_json(const DocumentMetadata& m) {
  Json j{{"created", m.created.iso8601()},
         {"updated", m.updated.iso8601()},
         {"deactivated", m.deactivated}};
  if (!m.version_id.empty()) j["versionId"] = m.version_id;
  if (m.previous_version_id) j["previousVersionId"] = *m.previous_version_id;
  return j;
}

DocumentMetadata metadata_from_json(const Json& j) {
  DocumentMetadata m;
  m.created = Timestamp::parse(j.at("created").get<std::string>());
  m.updated = Timestamp::parse(j.at("updated").get<std::string>());
  m.deactivated = j.at("deactivated").get<bool>();
  if (j.contains("versionId")) m.version_id = j["versionId"].get<std::string>();
  if (j.contains("previousVersionId")) {
    m.previous_version_id = j["previousVersionId"].get<std::string>();
  }
  return m;
}

Json DidDocument::body_json() const {
  Json controller = Json::array();
  for (const auto& c : controllers) controller.push_back(c.text());
  Json methods = Json::array();
  for (const auto& vm : verification_methods) methods.push_back(to_json(vm, id));
  Json service = Json::array();
  for (const auto& s : services) service.push_back(to_json(s, id));
  return Json{{"id", id.text()},
              {"controller", std::move(controller)},
              {"verificationMethod", std::move(methods)},
              {"service", std::move(service)}};
}

Json DidDocument::resolution_json() const {
  return Json{{"didDocument", body_json()}, {"didDocumentMetadata", to_json(metadata)}};
}

DidDocument DidDocument::from_resolution_json(const Json& j) {
  try {
    const auto& body = j.at("didDocument");
    DidDocument doc;
    doc.id = Did::parse(body.at("id").get<std::string>());
    for (const auto& c : body.at("controller")) {
      doc.controllers.push_back(Did::parse(c.get<std::string>()));
    }
    for (const auto& vm : body.at("verificationMethod")) {
      doc.verification_methods.push_back(vm_from_json(vm, doc.id));
    }
    for (const auto& s : body.at("service")) {
      doc.services.push_back(service_from_json(s, doc.id));
    }
    doc.metadata = metadata_from_json(j.at("didDocumentMetadata"));
    return doc;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("bad DID document: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("bad DID document: ") + e.what());
  }
}

const ServiceEntry* DidDocument::find_service(std::string_view fragment) const {
  for (const auto& s : services) {
    if (s.fragment == fragment) return &s;
  }
  return nullptr;
}

std::vector<const ServiceEntry*> DidDocument::services_of(ServiceType type) const {
  std::vector<const ServiceEntry*> out;
  for (const auto& s : services) {
    if (s.type == type) out.push_back(&s);
  }
  return out;
}

bool DidDocument::is_controller(const Did& did) const {
  return std::find(controllers.begin(), controllers.end(), did) != controllers.end();
}

std::string DidDocument::status() const {
  auto entries = services_of(ServiceType::Status);
  return entries.empty() ? std::string(kStatusActive) : entries.back()->endpoint;
}

DidDocument DocumentDelta::apply_to(const DidDocument& document) const {
  DidDocument next = document;
  for (const auto& fragment : remove_services) {
    auto it = std::find_if(next.services.begin(), next.services.end(),
                           [&](const ServiceEntry& s) { return s.fragment == fragment; });
    if (it == next.services.end()) {
      throw Error(ErrorCode::BadRequest, "no service entry #" + fragment + " to remove");
    }
    next.services.erase(it);
  }
  for (const auto& entry : add_services) {
    entry.validate();
    if (next.find_service(entry.fragment) != nullptr) {
      throw Error(ErrorCode::BadRequest, "duplicate service entry #" + entry.fragment);
    }
    next.services.push_back(entry);
  }
  if (controllers) {
    if (controllers->empty()) {
      throw Error(ErrorCode::BadRequest, "controller list must not be empty");
    }
    next.controllers = *controllers;
  }
  if (verification_methods) {
    std::set<std::string> seen;
    for (const auto& vm : *verification_methods) {
      if (!seen.insert(vm.fragment).second) {
        throw Error(ErrorCode::BadRequest, "duplicate verification method #" + vm.fragment);
      }
    }
    next.verification_methods = *verification_methods;
  }
  return next;
}

Json DocumentDelta::to_json(const Did& subject) const {
  Json j = Json::object();
  Json add = Json::array();
  for (const auto& s : add_services) add.push_back(identity::to_json(s, subject));
  j["addServices"] = std::move(add);
  j["removeServices"] = remove_services;
  if (controllers) {
    Json c = Json::array();
    for (const auto& d : *controllers) c.push_back(d.text());
    j["controller"] = std::move(c);
  }
  if (verification_methods) {
    Json m = Json::array();
    for (const auto& vm : *verification_methods) m.push_back(identity::to_json(vm, subject));
    j["verificationMethod"] = std::move(m);
  }
  return j;
}

DocumentDelta DocumentDelta::from_json(const Json& j, const Did& subject) {
  try {
    DocumentDelta delta;
    if (j.contains("addServices")) {
      for (const auto& s : j["addServices"]) {
        delta.add_services.push_back(service_from_json(s, subject));
      }
    }
    if (j.contains("removeServices")) {
      delta.remove_services = j["removeServices"].get<std::vector<std::string>>();
    }
    if (j.contains("controller")) {
      std::vector<Did> c;
      for (const auto& d : j["controller"]) c.push_back(Did::parse(d.get<std::string>()));
      delta.controllers = std::move(c);
    }
    if (j.contains("verificationMethod")) {
      std::vector<VerificationMethod> m;
      for (const auto& vm : j["verificationMethod"]) m.push_back(vm_from_json(vm, subject));
      delta.verification_methods = std::move(m);
    }
    return delta;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::BadRequest, std::string("bad document delta: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::BadRequest, std::string("bad document delta: ") + e.what());
  }
}

std::size_t ledger_payload_size(const DidDocument& document, const DocumentSizing& sizing) {
  DidDocument base = document;
  std::size_t compartments = 0;
  base.services.clear();
  for (const auto& s : document.services) {
    if (s.type == ServiceType::Compartment) {
      // Entry plus its separating comma.
      auto size = canonical(to_json(s, document.id)).size() + 1;
      compartments += std::max(size, sizing.compartment_entry_bytes);
    } else {
      base.services.push_back(s);
    }
  }
  auto base_size = canonical(base.resolution_json()).size();
  return std::max(base_size, sizing.baseline_bytes) + compartments;
}

}  // namespace didchain::identity
