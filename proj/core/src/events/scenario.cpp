#include "didchain/events/scenario.hpp"

#include "didchain/common/error.hpp"
#include "didchain/common/sha256.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace didchain::events {
namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedScript, what);
}

Verb verb_from_string(std::string_view text) {
  if (text == "produce") return Verb::Produce;
  if (text == "ship") return Verb::Ship;
  if (text == "receive") return Verb::Receive;
  if (text == "manufacture") return Verb::Manufacture;
  if (text == "withdraw") return Verb::Withdraw;
  malformed("unknown verb: " + std::string(text));
}

bool is_literal_did(const std::string& ref) { return identity::Did::is_valid(ref); }

}  // namespace

std::string_view to_string(Verb verb) noexcept {
  switch (verb) {
    case Verb::Produce: return "produce";
    case Verb::Ship: return "ship";
    case Verb::Receive: return "receive";
    case Verb::Manufacture: return "manufacture";
    case Verb::Withdraw: return "withdraw";
  }
  return "?";
}

const ActorSpec& ScenarioScript::actor(const std::string& alias) const {
  for (const auto& a : actors) {
    if (a.alias == alias) return a;
  }
  malformed("undeclared actor: " + alias);
}

void ScenarioScript::validate() const {
  std::set<std::string> aliases;
  for (const auto& a : actors) {
    if (a.alias.empty()) malformed("actor without alias");
    if (!aliases.insert(a.alias).second) malformed("duplicate actor alias: " + a.alias);
    if (a.seed.size() != 32) malformed("seed of " + a.alias + " must be 32 bytes");
  }
  std::set<std::string> assets;
  auto require_asset = [&](const std::string& ref, std::size_t i) {
    if (assets.count(ref) == 0 && !is_literal_did(ref)) {
      malformed("event " + std::to_string(i) + " refers to unknown asset '" + ref + "'");
    }
  };
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (aliases.count(e.actor) == 0) {
      malformed("event " + std::to_string(i) + " uses undeclared actor '" + e.actor + "'");
    }
    if (e.asset.empty()) malformed("event " + std::to_string(i) + " has no asset");
    switch (e.verb) {
      case Verb::Produce:
      case Verb::Manufacture:
        if (is_literal_did(e.asset) || !assets.insert(e.asset).second) {
          malformed("event " + std::to_string(i) + " redefines asset '" + e.asset + "'");
        }
        if (e.verb == Verb::Manufacture) {
          if (e.compartments.empty()) {
            malformed("event " + std::to_string(i) + " manufactures from nothing");
          }
          for (const auto& c : e.compartments) {
            if (c == e.asset) malformed("asset '" + c + "' cannot contain itself");
            require_asset(c, i);
          }
        }
        break;
      case Verb::Ship:
        if (aliases.count(e.recipient) == 0) {
          malformed("event " + std::to_string(i) + " ships to undeclared actor '" +
                    e.recipient + "'");
        }
        require_asset(e.asset, i);
        break;
      default:
        require_asset(e.asset, i);
    }
  }
}

Json ScenarioScript::to_json() const {
  Json out{{"actors", Json::array()}, {"events", Json::array()}};
  for (const auto& a : actors) {
    out["actors"].push_back({{"alias", a.alias},
                             {"role", std::string(events::to_string(a.role))},
                             {"seed", to_hex(a.seed)},
                             {"balance", a.balance},
                             {"mode", std::string(identity::to_string(a.mode))}});
  }
  for (const auto& e : events) {
    Json j{{"actor", e.actor}, {"verb", std::string(events::to_string(e.verb))}, {"asset", e.asset}};
    if (!e.attributes.empty()) j["attributes"] = e.attributes;
    switch (e.verb) {
      case Verb::Ship: j["to"] = e.recipient; break;
      case Verb::Manufacture:
        j["compartments"] = e.compartments;
        j["mode"] = std::string(events::to_string(e.mode));
        j["lean"] = e.lean;
        break;
      case Verb::Withdraw:
        j["reason"] = e.reason;
        j["deactivate"] = e.deactivate;
        break;
      default: break;
    }
    out["events"].push_back(std::move(j));
  }
  return out;
}

ScenarioScript ScenarioScript::from_json(const Json& j) {
  ScenarioScript script;
  try {
    if (!j.is_object() || !j.contains("actors") || !j.contains("events")) {
      malformed("script needs 'actors' and 'events'");
    }
    for (const auto& a : j.at("actors")) {
      ActorSpec spec;
      spec.alias = a.at("alias").get<std::string>();
      try {
        spec.role = role_from_string(a.at("role").get<std::string>());
        spec.seed = a.contains("seed") ? from_hex(a["seed"].get<std::string>())
                                       : seed_from_label(spec.alias);
        if (a.contains("mode")) {
          spec.mode = identity::secret_mode_from_string(a["mode"].get<std::string>());
        }
      } catch (const Error& e) {
        malformed("actor " + spec.alias + ": " + e.what());
      }
      spec.balance = a.at("balance").get<ledger::TokenAmount>();
      script.actors.push_back(std::move(spec));
    }
    for (const auto& e : j.at("events")) {
      EventCommand cmd;
      cmd.actor = e.at("actor").get<std::string>();
      cmd.verb = verb_from_string(e.at("verb").get<std::string>());
      cmd.asset = e.at("asset").get<std::string>();
      cmd.recipient = e.value("to", std::string());
      if (e.contains("compartments")) {
        cmd.compartments = e["compartments"].get<std::vector<std::string>>();
      }
      if (e.contains("mode")) {
        try {
          cmd.mode = commit_mode_from_string(e["mode"].get<std::string>());
        } catch (const Error& err) {
          malformed(err.what());
        }
      }
      cmd.lean = e.value("lean", false);
      cmd.reason = e.value("reason", std::string());
      cmd.deactivate = e.value("deactivate", false);
      if (e.contains("attributes")) cmd.attributes = e["attributes"].get<Attributes>();
      script.events.push_back(std::move(cmd));
    }
  } catch (const Json::exception& e) {
    malformed(std::string("script schema: ") + e.what());
  }
  script.validate();
  return script;
}

ScenarioScript ScenarioScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot read script " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buffer.str());
  } catch (const Json::exception& e) {
    malformed(path.string() + ": " + e.what());
  }
  return from_json(j);
}

ScenarioRun run_scenario(SupplyChain& engine, const ScenarioScript& script) {
  script.validate();
  for (const auto& a : script.actors) {
    engine.register_actor(a.alias, a.role, a.seed, a.balance, a.mode);
  }
  ScenarioRun run;
  auto resolve_ref = [&](const std::string& ref) {
    if (auto it = run.assets.find(ref); it != run.assets.end()) return it->second;
    return Did::parse(ref);
  };
  for (std::size_t i = 0; i < script.events.size(); ++i) {
    const auto& cmd = script.events[i];
    const auto& actor = engine.actor(cmd.actor);
    ExecutedEvent done;
    done.index = i;
    done.actor = cmd.actor;
    done.verb = cmd.verb;
    done.asset_alias = cmd.asset;
    switch (cmd.verb) {
      case Verb::Produce: {
        auto r = engine.produce(actor, cmd.attributes);
        run.assets[cmd.asset] = r.did;
        done.asset = r.did;
        done.cid = r.cid;
        break;
      }
      case Verb::Manufacture: {
        for (const auto& c : cmd.compartments) done.compartments.push_back(resolve_ref(c));
        auto r = engine.manufacture(actor, done.compartments, cmd.attributes,
                                    ManufactureOptions{cmd.mode, cmd.lean});
        run.assets[cmd.asset] = r.did;
        done.asset = r.did;
        done.cid = r.cid;
        break;
      }
      case Verb::Ship:
        done.asset = resolve_ref(cmd.asset);
        done.cid = engine.ship(actor, done.asset, engine.actor(cmd.recipient));
        break;
      case Verb::Receive:
        done.asset = resolve_ref(cmd.asset);
        done.cid = engine.receive(actor, done.asset);
        break;
      case Verb::Withdraw:
        done.asset = resolve_ref(cmd.asset);
        done.cid = engine.withdraw(actor, done.asset, cmd.reason, cmd.deactivate);
        break;
    }
    run.log.push_back(std::move(done));
  }
  return run;
}

Bytes seed_from_label(std::string_view label) {
  auto digest = sha256(std::string("didchain-seed:") + std::string(label));
  return Bytes(digest.begin(), digest.end());
}

namespace {

struct SimAsset {
  std::string alias;
  std::string holder;
  AssetStatus status = AssetStatus::Produced;
};

}  // namespace

ScenarioScript random_scenario(std::uint64_t seed, const RandomScenarioOptions& options) {
  std::mt19937_64 rng(seed);
  ScenarioScript script;
  const std::vector<std::pair<std::string, Role>> cast{
      {"producer-a", Role::Producer},         {"producer-b", Role::Producer},
      {"supplier-a", Role::Supplier},         {"supplier-b", Role::Supplier},
      {"manufacturer-a", Role::Manufacturer}, {"manufacturer-b", Role::Manufacturer},
      {"retailer", Role::Retailer},           {"customer", Role::Customer}};
  for (const auto& [alias, role] : cast) {
    script.actors.push_back(
        {alias, role, seed_from_label(alias), options.balance, identity::SecretMode::InternalSecret});
  }

  std::vector<SimAsset> assets;
  std::size_t next_id = 0;
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto held = [](const SimAsset& a) {
    return a.status == AssetStatus::Produced || a.status == AssetStatus::Received;
  };

  while (script.events.size() < options.events) {
    std::vector<std::size_t> shippable, receivable, withdrawable;
    std::map<std::string, std::vector<std::size_t>> usable;  // manufacturer -> assets
    for (std::size_t i = 0; i < assets.size(); ++i) {
      const auto& a = assets[i];
      if (held(a)) {
        shippable.push_back(i);
        withdrawable.push_back(i);
        usable[a.holder].push_back(i);
      }
      if (a.status == AssetStatus::InTransit) receivable.push_back(i);
    }
    std::vector<std::string> makers;
    for (const auto& [alias, role] : cast) {
      if (role == Role::Manufacturer && !usable[alias].empty()) makers.push_back(alias);
    }

    std::vector<double> weights{options.produce_weight,
                                shippable.empty() ? 0.0 : options.ship_weight,
                                receivable.empty() ? 0.0 : options.receive_weight,
                                makers.empty() ? 0.0 : options.manufacture_weight,
                                withdrawable.empty() ? 0.0 : options.withdraw_weight};
    auto choice = std::discrete_distribution<int>(weights.begin(), weights.end())(rng);

    EventCommand cmd;
    switch (choice) {
      case 0: {
        cmd.verb = Verb::Produce;
        cmd.actor = pick(2) == 0 ? "producer-a" : "producer-b";
        cmd.asset = "asset-" + std::to_string(next_id++);
        cmd.attributes["batch"] = std::to_string(rng() % 100000);
        assets.push_back({cmd.asset, cmd.actor, AssetStatus::Produced});
        break;
      }
      case 1: {
        auto& a = assets[shippable[pick(shippable.size())]];
        std::string to;
        do {
          to = cast[pick(cast.size())].first;
        } while (to == a.holder);
        cmd.verb = Verb::Ship;
        cmd.actor = a.holder;
        cmd.asset = a.alias;
        cmd.recipient = to;
        a.holder = to;
        a.status = AssetStatus::InTransit;
        break;
      }
      case 2: {
        auto& a = assets[receivable[pick(receivable.size())]];
        cmd.verb = Verb::Receive;
        cmd.actor = a.holder;
        cmd.asset = a.alias;
        a.status = AssetStatus::Received;
        break;
      }
      case 3: {
        auto maker = makers[pick(makers.size())];
        auto pool = usable[maker];
        std::shuffle(pool.begin(), pool.end(), rng);
        auto n = 1 + pick(std::min(pool.size(), options.max_compartments));
        cmd.verb = Verb::Manufacture;
        cmd.actor = maker;
        cmd.asset = "asset-" + std::to_string(next_id++);
        for (std::size_t k = 0; k < n; ++k) {
          cmd.compartments.push_back(assets[pool[k]].alias);
          assets[pool[k]].status = AssetStatus::Consumed;
        }
        cmd.mode = options.allow_merkle && pick(2) == 0 ? CommitMode::MerkleRoot
                                                        : CommitMode::ServiceList;
        assets.push_back({cmd.asset, maker, AssetStatus::Produced});
        break;
      }
      default: {
        auto& a = assets[withdrawable[pick(withdrawable.size())]];
        cmd.verb = Verb::Withdraw;
        cmd.actor = a.holder;
        cmd.asset = a.alias;
        cmd.reason = "random withdrawal";
        cmd.deactivate = options.allow_deactivate && pick(2) == 0;
        a.status = AssetStatus::Withdrawn;
        break;
      }
    }
    script.events.push_back(std::move(cmd));
  }
  return script;
}

}  // namespace didchain::events
