#pragma once

#include "didchain/events/supply_chain.hpp"

#include <map>
#include <string>
#include <vector>

namespace didchain::events {

// Scenario script (JSON):
//
//   {
//     "actors": [
//       {"alias": "farm", "role": "Producer", "seed": "<64 hex>", "balance": 1000,
//        "mode": "internal"}
//     ],
//     "events": [
//       {"actor": "farm", "verb": "produce", "asset": "milk", "attributes": {...}},
//       {"actor": "farm", "verb": "ship", "asset": "milk", "to": "dairy"},
//       {"actor": "dairy", "verb": "receive", "asset": "milk"},
//       {"actor": "dairy", "verb": "manufacture", "asset": "cheese",
//        "compartments": ["milk", "yeast"], "mode": "ServiceList", "lean": false},
//       {"actor": "shop", "verb": "withdraw", "asset": "cheese", "reason": "recall",
//        "deactivate": false}
//     ]
//   }
//
// produce and manufacture introduce a new asset alias; every other verb and
// every compartment refers to an alias introduced earlier (or a literal DID).

enum class Verb { Produce, Ship, Receive, Manufacture, Withdraw };

std::string_view to_string(Verb verb) noexcept;

struct ActorSpec {
  std::string alias;
  Role role = Role::Producer;
  Bytes seed;  // 32 bytes
  ledger::TokenAmount balance = 0;
  identity::SecretMode mode = identity::SecretMode::InternalSecret;
};

struct EventCommand {
  std::string actor;
  Verb verb = Verb::Produce;
  std::string asset;
  std::string recipient;                  // ship
  std::vector<std::string> compartments;  // manufacture
  CommitMode mode = CommitMode::ServiceList;
  bool lean = false;
  std::string reason;                     // withdraw
  bool deactivate = false;                // withdraw
  Attributes attributes;
};

struct ScenarioScript {
  std::vector<ActorSpec> actors;
  std::vector<EventCommand> events;

  // Throws Error(MalformedScript) on schema or reference errors.
  void validate() const;
  const ActorSpec& actor(const std::string& alias) const;

  Json to_json() const;
  static ScenarioScript from_json(const Json& j);
  static ScenarioScript load(const std::filesystem::path& path);
};

struct ExecutedEvent {
  std::size_t index = 0;
  std::string actor;
  Verb verb = Verb::Produce;
  std::string asset_alias;
  Did asset;
  Cid cid;
  std::vector<Did> compartments;
};

struct ScenarioRun {
  std::map<std::string, Did> assets;  // alias -> DID
  std::vector<ExecutedEvent> log;
};

// Registers the script's actors and executes its events in order. Stops at
// the first failing event and rethrows its error.
ScenarioRun run_scenario(SupplyChain& engine, const ScenarioScript& script);

struct RandomScenarioOptions {
  std::size_t events = 20;
  // Probability weights for the verb chosen at each step when feasible.
  double produce_weight = 3.0;
  double ship_weight = 3.0;
  double receive_weight = 4.0;
  double manufacture_weight = 2.0;
  double withdraw_weight = 0.3;
  std::size_t max_compartments = 4;
  bool allow_merkle = true;
  bool allow_deactivate = true;
  ledger::TokenAmount balance = 1'000'000;
};

// A valid script with exactly options.events events, deterministic in seed.
ScenarioScript random_scenario(std::uint64_t seed, const RandomScenarioOptions& options = {});

// Fixed 32-byte seed derived from a label, for reproducible fixtures.
Bytes seed_from_label(std::string_view label);

}  // namespace didchain::events
