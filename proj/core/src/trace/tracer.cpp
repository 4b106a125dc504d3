#include "didchain/trace/tracer.hpp"

#include "didchain/common/error.hpp"
#include "didchain/events/merkle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace didchain::trace {
namespace {

using identity::DidDocument;
using identity::ServiceType;

[[noreturn]] void violation(const std::string& what) {
  throw Error(ErrorCode::IntegrityViolation, what);
}

std::vector<std::string> event_links(const DidDocument& doc) {
  std::vector<std::string> out;
  for (const auto* e : doc.services_of(ServiceType::EventMetadata)) out.push_back(e->endpoint);
  return out;
}

// The product must commit to exactly the compartment list of its
// Manufacture record, either entry by entry or through a Merkle root.
void check_commitment(const DidDocument& doc, const store::EventRecord& record,
                      const Cid& cid) {
  auto listed = doc.services_of(ServiceType::Compartment);
  auto roots = doc.services_of(ServiceType::CompartmentMerkleRoot);
  if (!listed.empty()) {
    bool same = listed.size() == record.compartments.size();
    for (std::size_t i = 0; same && i < listed.size(); ++i) {
      same = listed[i]->endpoint == record.compartments[i].text();
    }
    if (!same) {
      violation("compartments of " + doc.id.text() + " disagree with record " + cid.text());
    }
    return;
  }
  if (roots.size() == 1) {
    auto tree = events::build_compartment_merkle(record.compartments);
    if (to_hex(tree.root) != roots.front()->endpoint) {
      violation("merkle root of " + doc.id.text() + " does not commit to record " + cid.text());
    }
    for (std::size_t i = 0; i < record.compartments.size(); ++i) {
      if (!events::verify_inclusion(record.compartments[i].text(), tree.proofs[i], tree.root)) {
        violation("inclusion proof failed for " + record.compartments[i].text());
      }
    }
    return;
  }
  violation(doc.id.text() + " has no compartment commitment for record " + cid.text());
}

Json node_json(const CompartmentNode& node) {
  Json j{{"did", node.did.text()},
         {"multiplicity", node.multiplicity},
         {"expanded", node.expanded},
         {"chainOk", node.chain_ok},
         {"compartments", Json::array()}};
  for (const auto& c : node.compartments) j["compartments"].push_back(node_json(c));
  return j;
}

void node_text(std::ostringstream& out, const CompartmentNode& node, int depth) {
  out << std::string(depth * 2, ' ') << node.did.text();
  if (node.multiplicity > 1) out << " x" << node.multiplicity;
  if (!node.expanded) out << " (see above)";
  if (!node.chain_ok) out << " [chain broken]";
  out << '\n';
  for (const auto& c : node.compartments) node_text(out, c, depth + 1);
}

}  // namespace

ChainVerdict verify_history_chain(const identity::Registry& registry, const Did& did) {
  auto history = registry.stored_history(did);
  ChainVerdict verdict;
  auto fail = [&](std::size_t i, std::string reason) {
    verdict.ok = false;
    verdict.failed_version = i;
    verdict.reason = std::move(reason);
    return verdict;
  };
  std::optional<std::string> previous;
  std::optional<Timestamp> created, updated;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& v = history[i];
    if (identity::compute_version_id(v.bytes, previous) != v.version_id) {
      return fail(i, "version id does not match stored bytes");
    }
    identity::DocumentMetadata meta;
    try {
      auto j = parse_json(v.bytes);
      meta = identity::metadata_from_json(j.at("didDocumentMetadata"));
      if (j.at("didDocument").at("id").get<std::string>() != did.text()) {
        return fail(i, "version belongs to another DID");
      }
    } catch (const std::exception& e) {
      return fail(i, std::string("unreadable version: ") + e.what());
    }
    if (meta.previous_version_id != previous) {
      return fail(i, "previous version link does not match");
    }
    if (created && meta.created != *created) return fail(i, "creation time changed");
    if (updated && meta.updated < *updated) return fail(i, "update time went backwards");
    created = meta.created;
    updated = meta.updated;
    previous = v.version_id;
  }
  return verdict;
}

struct Tracer::Walk {
  TraceReport report;
  std::set<Did> expanded;
  std::vector<Did> path;
};

TraceReport Tracer::trace(const Did& root) {
  Walk walk;
  walk.report.root = root;
  walk.report.verified = true;
  walk.report.compartment_tree.did = root;
  visit(walk, root, std::nullopt, walk.report.compartment_tree);
  return std::move(walk.report);
}

void Tracer::visit(Walk& walk, const Did& did, const std::optional<std::string>& start_version,
                   CompartmentNode& node) {
  auto& report = walk.report;
  walk.path.push_back(did);
  walk.expanded.insert(did);

  std::vector<DidDocument> chain;
  chain.push_back(start_version ? registry_.resolve_version(did, *start_version)
                                : registry_.resolve(did));
  ++report.resolution_count;
  while (const auto& prev = chain.back().metadata.previous_version_id) {
    auto older = registry_.resolve_version(did, *prev);
    ++report.resolution_count;
    chain.push_back(std::move(older));
  }
  std::reverse(chain.begin(), chain.end());

  std::optional<std::pair<store::EventRecord, Cid>> manufacture;
  std::set<std::string> seen;
  for (const auto& version : chain) {
    for (const auto& link : event_links(version)) {
      if (!seen.insert(link).second) continue;
      Cid cid;
      try {
        cid = Cid::parse(link);
      } catch (const Error&) {
        violation("malformed event link " + link + " in " + did.text());
      }
      store::EventRecord record;
      try {
        record = store_.get(cid);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NotFound) {
          violation("event record " + cid.text() + " linked from " + did.text() + " is missing");
        }
        if (e.code() == ErrorCode::MalformedRecord) {
          violation("event record " + cid.text() + " is unreadable");
        }
        throw;
      }
      ++report.resolution_count;
      if (record.asset != did) {
        violation("event record " + cid.text() + " belongs to " + record.asset.text());
      }
      if (record.type == store::EventType::Manufacture && !manufacture) {
        manufacture.emplace(record, cid);
      }
      report.events.push_back({did, cid, version.metadata.version_id, std::move(record)});
    }
  }

  node.chain_ok = verify_history_chain(registry_, did).ok;
  report.verified = report.verified && node.chain_ok;

  if (manufacture) {
    const auto& [record, cid] = *manufacture;
    check_commitment(chain.back(), record, cid);
    for (std::size_t i = 0; i < record.compartments.size(); ++i) {
      const auto& c = record.compartments[i];
      if (std::find(walk.path.begin(), walk.path.end(), c) != walk.path.end()) {
        violation("compartment cycle through " + c.text());
      }
      auto dup = std::find_if(node.compartments.begin(), node.compartments.end(),
                              [&](const CompartmentNode& n) { return n.did == c; });
      if (dup != node.compartments.end()) {
        ++dup->multiplicity;
        continue;
      }
      CompartmentNode child;
      child.did = c;
      if (walk.expanded.count(c) != 0) {
        child.expanded = false;
        node.compartments.push_back(std::move(child));
        continue;
      }
      std::optional<std::string> pinned;
      if (i < record.compartment_versions.size()) pinned = record.compartment_versions[i];
      visit(walk, c, pinned, child);
      node.compartments.push_back(std::move(child));
    }
  }
  walk.path.pop_back();
}

Json TraceReport::to_json() const {
  Json j{{"root", root.text()},
         {"events", Json::array()},
         {"compartmentTree", node_json(compartment_tree)},
         {"resolutionCount", resolution_count},
         {"totalEvents", events.size()},
         {"verified", verified}};
  for (const auto& e : events) {
    j["events"].push_back({{"asset", e.asset.text()},
                           {"cid", e.cid.text()},
                           {"versionId", e.version_id},
                           {"record", e.record.to_json()}});
  }
  return j;
}

std::string TraceReport::to_text() const {
  std::ostringstream out;
  out << "trace " << root.text() << '\n'
      << "events: " << events.size() << "  resolutions: " << resolution_count
      << "  verified: " << (verified ? "yes" : "NO") << "\n\n";
  for (const auto& e : events) {
    out << e.record.timestamp.iso8601() << "  " << store::to_string(e.record.type) << "  "
        << e.asset.text() << "  by " << e.record.actor.text();
    if (e.record.counterparty) out << " <-> " << e.record.counterparty->text();
    out << "  " << e.cid.text() << '\n';
  }
  out << "\ncompartments:\n";
  node_text(out, compartment_tree, 1);
  return out.str();
}

Json TrackReport::to_json() const {
  Json j{{"did", did.text()},
         {"kind", std::string(events::to_string(kind))},
         {"status", std::string(events::to_string(status))},
         {"controller", controller.text()},
         {"deactivated", deactivated},
         {"resolutionCount", resolution_count}};
  if (latest_event) j["latestEvent"] = latest_event->text();
  if (consumed_by) j["consumedBy"] = consumed_by->text();
  return j;
}

TraceReport trace(const events::SupplyChain& engine, const Did& did) {
  auto lock = engine.read_lock();
  return Tracer(engine.registry(), engine.store()).trace(did);
}

TrackReport track(const events::SupplyChain& engine, const Did& did) {
  auto lock = engine.read_lock();
  auto doc = engine.registry().resolve(did);
  TrackReport r;
  r.did = did;
  r.resolution_count = 1;
  r.controller = doc.controllers.front();
  r.deactivated = doc.metadata.deactivated;
  auto links = doc.services_of(ServiceType::EventMetadata);
  if (!links.empty()) r.latest_event = Cid::parse(links.back()->endpoint);
  auto state = engine.find_asset(did, lock);
  if (!state) throw Error(ErrorCode::NotFound, did.text() + " is not a supply-chain asset");
  r.kind = state->kind;
  r.status = state->status;
  r.consumed_by = state->consumed_by;
  return r;
}

}  // namespace didchain::trace
