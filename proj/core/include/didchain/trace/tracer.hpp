#pragma once

#include "didchain/events/supply_chain.hpp"
#include "didchain/identity/registry.hpp"
#include "didchain/store/object_store.hpp"

#include <optional>
#include <string>
#include <vector>

namespace didchain::trace {

using identity::Did;

struct TracedEvent {
  Did asset;
  Cid cid;
  std::string version_id;  // version that linked the event
  store::EventRecord record;
};

struct CompartmentNode {
  Did did;
  std::size_t multiplicity = 1;
  // False when this asset was already expanded elsewhere in the tree.
  bool expanded = true;
  bool chain_ok = true;
  std::vector<CompartmentNode> compartments;
};

struct TraceReport {
  Did root;
  std::vector<TracedEvent> events;  // depth-first, each asset in version order
  CompartmentNode compartment_tree;
  std::size_t resolution_count = 0;
  bool verified = false;

  std::size_t total_events() const noexcept { return events.size(); }
  Json to_json() const;
  std::string to_text() const;
};

struct TrackReport {
  Did did;
  events::AssetKind kind = events::AssetKind::RawMaterial;
  events::AssetStatus status = events::AssetStatus::Produced;
  Did controller;
  std::optional<Cid> latest_event;
  std::optional<Did> consumed_by;
  bool deactivated = false;
  std::size_t resolution_count = 0;

  Json to_json() const;
};

struct ChainVerdict {
  bool ok = true;
  // Index of the first failing version, oldest = 0.
  std::optional<std::size_t> failed_version;
  std::string reason;
};

// Recomputes every version id from the stored bytes and its predecessor and
// checks that created stays fixed and updated never decreases.
// Throws Error(NotFound).
ChainVerdict verify_history_chain(const identity::Registry& registry, const Did& did);

// Recursive provenance of an asset. Every resolve, resolve_version and store
// get is counted; the count for an asset whose latest version links its last
// event is exactly 2 per event in the compartment closure.
class Tracer {
 public:
  Tracer(const identity::Registry& registry, const store::ObjectStore& store)
      : registry_(registry), store_(store) {}

  // Throws NotFound, or IntegrityViolation naming the offending Cid or DID.
  TraceReport trace(const Did& root);

 private:
  struct Walk;
  void visit(Walk& walk, const Did& did, const std::optional<std::string>& start_version,
             CompartmentNode& node);

  const identity::Registry& registry_;
  const store::ObjectStore& store_;
};

// Both take the engine's read lock, so they observe one consistent snapshot.
TraceReport trace(const events::SupplyChain& engine, const Did& did);
// One resolution; state comes from the engine's asset index.
TrackReport track(const events::SupplyChain& engine, const Did& did);

}  // namespace didchain::trace
