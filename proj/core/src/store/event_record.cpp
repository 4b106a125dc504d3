#include "didchain/store/event_record.hpp"

#include "didchain/common/error.hpp"

namespace didchain::store {

using identity::Did;

std::string_view to_string(EventType type) noexcept {
  switch (type) {
    case EventType::Produce: return "Produce";
    case EventType::Ship: return "Ship";
    case EventType::Receive: return "Receive";
    case EventType::Manufacture: return "Manufacture";
    case EventType::Withdraw: return "Withdraw";
  }
  return "Produce";
}

EventType event_type_from_string(std::string_view text) {
  for (auto t : {EventType::Produce, EventType::Ship, EventType::Receive,
                 EventType::Manufacture, EventType::Withdraw}) {
    if (to_string(t) == text) return t;
  }
  throw Error(ErrorCode::MalformedRecord, "unknown event type: " + std::string(text));
}

void EventRecord::validate() const {
  if (asset.empty() || actor.empty()) {
    throw Error(ErrorCode::MalformedRecord, "event record needs asset and actor");
  }
  bool manufacture = type == EventType::Manufacture;
  if (manufacture == compartments.empty()) {
    throw Error(ErrorCode::MalformedRecord,
                "compartments must be present exactly for Manufacture events");
  }
  if (!compartment_versions.empty() && compartment_versions.size() != compartments.size()) {
    throw Error(ErrorCode::MalformedRecord, "compartment versions do not match compartments");
  }
  if ((type == EventType::Ship || type == EventType::Receive) && !counterparty) {
    throw Error(ErrorCode::MalformedRecord, "Ship and Receive events need a counterparty");
  }
}

Json EventRecord::to_json() const {
  Json j{{"type", to_string(type)},
         {"asset", asset.text()},
         {"actor", actor.text()},
         {"attributes", attributes},
         {"timestamp", timestamp.iso8601()}};
  if (counterparty) j["counterparty"] = counterparty->text();
  if (!compartments.empty()) {
    Json list = Json::array();
    for (const auto& c : compartments) list.push_back(c.text());
    j["compartments"] = std::move(list);
  }
  if (!compartment_versions.empty()) j["compartmentVersions"] = compartment_versions;
  if (issuer_signature) {
    j["issuerSignature"] = Json{{"signer", issuer_signature->signer.text()},
                                {"signature", to_hex(issuer_signature->signature)}};
  }
  return j;
}

EventRecord EventRecord::from_json(const Json& j) {
  try {
    EventRecord r;
    r.type = event_type_from_string(j.at("type").get<std::string>());
    r.asset = Did::parse(j.at("asset").get<std::string>());
    r.actor = Did::parse(j.at("actor").get<std::string>());
    r.attributes = j.at("attributes").get<std::map<std::string, std::string>>();
    r.timestamp = Timestamp::parse(j.at("timestamp").get<std::string>());
    if (j.contains("counterparty")) {
      r.counterparty = Did::parse(j["counterparty"].get<std::string>());
    }
    if (j.contains("compartments")) {
      for (const auto& c : j["compartments"]) r.compartments.push_back(Did::parse(c.get<std::string>()));
    }
    if (j.contains("compartmentVersions")) {
      r.compartment_versions = j["compartmentVersions"].get<std::vector<std::string>>();
    }
    if (j.contains("issuerSignature")) {
      const auto& s = j["issuerSignature"];
      r.issuer_signature = IssuerSignature{Did::parse(s.at("signer").get<std::string>()),
                                           from_hex(s.at("signature").get<std::string>())};
    }
    r.validate();
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("bad event record: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedRecord) throw;
    throw Error(ErrorCode::MalformedRecord, std::string("bad event record: ") + e.what());
  }
}

std::string EventRecord::canonical_bytes() const { return canonical(to_json()); }

std::string EventRecord::signing_bytes() const {
  auto j = to_json();
  j.erase("issuerSignature");
  return canonical(j);
}

}  // namespace didchain::store
