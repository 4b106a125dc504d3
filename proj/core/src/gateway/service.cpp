#include "didchain/gateway/service.hpp"

#include "didchain/costing/cost_model.hpp"
#include "didchain/trace/tracer.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace didchain::gateway {
namespace {

using events::Did;
using identity::DocumentDelta;

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, what);
}

[[noreturn]] void bad_request(const std::string& what) {
  throw Error(ErrorCode::BadRequest, what);
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream in(path);
  std::string part;
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

const Json& field(const Json& body, const char* name) {
  if (!body.is_object() || !body.contains(name)) {
    bad_request(std::string("missing field '") + name + "'");
  }
  return body[name];
}

std::string string_field(const Json& body, const char* name) {
  const auto& v = field(body, name);
  if (!v.is_string()) bad_request(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

events::Attributes attributes_of(const Json& body) {
  if (!body.is_object() || !body.contains("attributes")) return {};
  try {
    return body["attributes"].get<events::Attributes>();
  } catch (const Json::exception&) {
    bad_request("attributes must map strings to strings");
  }
}

std::optional<Bytes> signature_of(const Json& body) {
  if (!body.is_object() || !body.contains("signature")) return std::nullopt;
  return from_hex(string_field(body, "signature"));
}

void parse_bind(const std::string& bind, std::string& host, int& port) {
  auto colon = bind.rfind(':');
  if (colon == std::string::npos) bad_config("bind must be host:port, got '" + bind + "'");
  host = bind.substr(0, colon);
  try {
    std::size_t used = 0;
    port = std::stoi(bind.substr(colon + 1), &used);
    if (used != bind.size() - colon - 1 || port < 0 || port > 65535) throw std::out_of_range("");
  } catch (const std::exception&) {
    bad_config("bad port in bind address '" + bind + "'");
  }
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidToken: return 401;
    case ErrorCode::Unauthorized:
    case ErrorCode::NotController:
    case ErrorCode::WrongRole: return 403;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownVersion:
    case ErrorCode::UnknownAccount: return 404;
    case ErrorCode::WrongState:
    case ErrorCode::Deactivated: return 409;
    case ErrorCode::PayloadTooLarge: return 413;
    case ErrorCode::InsufficientBalance:
    case ErrorCode::CompartmentLimitExceeded: return 422;
    case ErrorCode::IntegrityViolation:
    case ErrorCode::ConfigInvalid:
    case ErrorCode::BindFailure: return 500;
    default: return 400;
  }
}

GatewayConfig GatewayConfig::from_json(const Json& j) {
  GatewayConfig c;
  try {
    if (!j.is_object()) bad_config("config must be a JSON object");
    if (j.contains("bind")) parse_bind(j["bind"].get<std::string>(), c.host, c.port);
    if (j.contains("dataDir")) c.engine.data_dir = j["dataDir"].get<std::string>();
    c.engine.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("clockStart")) {
      c.engine.clock_start = Timestamp::parse(j["clockStart"].get<std::string>());
    }
    if (j.contains("ledger")) {
      const auto& l = j["ledger"];
      auto& lc = c.engine.ledger;
      lc.block_size_limit = l.value("blockSizeLimit", lc.block_size_limit);
      lc.token_price_usd = l.value("tokenPriceUsd", lc.token_price_usd);
      if (l.contains("fees")) {
        const auto& f = l["fees"];
        lc.fees.create_fee = f.value("create", lc.fees.create_fee);
        lc.fees.update_fee = f.value("update", lc.fees.update_fee);
        lc.fees.deactivate_fee = f.value("deactivate", lc.fees.deactivate_fee);
      }
    }
    if (j.contains("maxCompartmentsPerTx")) {
      c.engine.max_compartments_per_tx = j["maxCompartmentsPerTx"].get<std::size_t>();
    }
    c.engine.circular_reuse = j.value("circularReuse", false);
    for (const auto& a : j.value("accounts", Json::array())) {
      AccountConfig acct;
      acct.alias = a.at("alias").get<std::string>();
      acct.role = events::role_from_string(a.at("role").get<std::string>());
      acct.mode = identity::secret_mode_from_string(a.value("mode", std::string("internal")));
      acct.balance = a.at("balance").get<ledger::TokenAmount>();
      acct.token = a.at("token").get<std::string>();
      if (acct.token.empty()) bad_config("empty token for " + acct.alias);
      if (acct.mode == identity::SecretMode::InternalSecret) {
        acct.seed = from_hex(a.at("seed").get<std::string>());
        if (acct.seed.size() != 32) bad_config("seed of " + acct.alias + " must be 32 bytes");
      } else {
        auto raw = from_hex(a.at("publicKey").get<std::string>());
        if (raw.size() != 32) bad_config("publicKey of " + acct.alias + " must be 32 bytes");
        identity::PublicKey key{};
        std::copy(raw.begin(), raw.end(), key.begin());
        acct.key = key;
      }
      c.accounts.push_back(std::move(acct));
    }
    c.engine.ledger.validate();
  } catch (const Json::exception& e) {
    bad_config(std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    bad_config(std::string("config: ") + e.what());
  }
  return c;
}

GatewayConfig GatewayConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buffer.str());
  } catch (const Json::exception& e) {
    bad_config(path.string() + ": " + e.what());
  }
  auto c = from_json(j);
  c.apply_environment();
  return c;
}

void GatewayConfig::apply_environment() {
  if (const char* bind = std::getenv("DIDCHAIN_BIND"); bind && *bind) parse_bind(bind, host, port);
  if (const char* dir = std::getenv("DIDCHAIN_DATA_DIR"); dir && *dir) engine.data_dir = dir;
}

Service::Service(GatewayConfig config) : config_(std::move(config)) {
  engine_ = std::make_unique<events::SupplyChain>(config_.engine);
  for (const auto& a : config_.accounts) {
    if (!tokens_.emplace(a.token, a.alias).second) bad_config("duplicate token for " + a.alias);
    if (a.mode == identity::SecretMode::InternalSecret) {
      engine_->register_actor(a.alias, a.role, a.seed, a.balance);
    } else {
      engine_->register_client_actor(a.alias, a.role, *a.key, a.balance);
    }
  }
}

const events::Actor& Service::authenticate(const ApiRequest& request) const {
  if (!request.token) throw Error(ErrorCode::InvalidToken, "missing bearer token");
  auto it = tokens_.find(*request.token);
  if (it == tokens_.end()) throw Error(ErrorCode::InvalidToken, "unknown token");
  return engine_->actor(it->second);
}

ApiResponse Service::handle(const ApiRequest& request) {
  try {
    return {200, Json{{"result", dispatch(request)}}};
  } catch (const Error& e) {
    return {http_status(e.code()),
            Json{{"error_code", std::string(error_name(e.code()))}, {"message", e.what()}}};
  } catch (const Json::exception& e) {
    return {400, Json{{"error_code", "BadRequest"}, {"message", e.what()}}};
  } catch (const std::exception& e) {
    return {500, Json{{"error_code", "Internal"}, {"message", e.what()}}};
  }
}

Json Service::dispatch(const ApiRequest& request) {
  auto parts = split_path(request.path);
  const auto& body = request.body;
  auto& engine = *engine_;
  auto& registry = engine.registry();
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  auto route = [&](std::initializer_list<std::string_view> prefix, bool with_arg) {
    if (parts.size() != prefix.size() + (with_arg ? 1 : 0)) return false;
    std::size_t i = 0;
    for (auto p : prefix) {
      if (parts[i++] != p) return false;
    }
    return true;
  };
  auto resolve_actor_ref = [&](const std::string& ref) -> const events::Actor& {
    if (const auto* a = engine.find_actor(ref)) return *a;
    if (identity::Did::is_valid(ref)) {
      if (const auto* a = engine.actor_by_did(Did::parse(ref))) return *a;
    }
    throw Error(ErrorCode::NotFound, "unknown actor: " + ref);
  };

  if (get && route({"did", "search"}, true)) {
    auto did = Did::parse(parts[2]);
    if (auto v = request.query.find("versionId"); v != request.query.end()) {
      return registry.resolve_version(did, v->second).resolution_json();
    }
    return registry.resolve(did).resolution_json();
  }
  if (get && route({"did", "versions"}, true)) {
    Json out = Json::array();
    for (const auto& m : registry.list_versions(Did::parse(parts[2]))) {
      out.push_back(identity::to_json(m));
    }
    return out;
  }
  if (get && route({"trace"}, true)) {
    auto report = trace::trace(engine, Did::parse(parts[1]));
    return report.to_json();
  }
  if (get && route({"track"}, true)) {
    return trace::track(engine, Did::parse(parts[1])).to_json();
  }

  // Unknown routes are NotFound whether or not a token was sent.
  bool known = (get && (route({"did", "list"}, false) || route({"cost", "report"}, false))) ||
               (post && (route({"did", "create"}, false) || route({"did", "prepare"}, false) ||
                         route({"did", "update"}, false) || route({"did", "deactivate"}, false) ||
                         route({"event"}, true)));
  if (!known) {
    throw Error(ErrorCode::NotFound, "no route for " + request.method + " " + request.path);
  }
  const auto& actor = authenticate(request);
  const auto& account = actor.account;

  if (get && route({"did", "list"}, false)) {
    Json out = Json::array();
    for (const auto& d : registry.list_dids(account)) out.push_back(d.text());
    return out;
  }
  if (get && route({"cost", "report"}, false)) {
    const auto& price = engine.ledger().config().token_price_usd;
    Json out{{"tokenPriceUsd", price}, {"actors", Json::array()}};
    for (const auto& r : costing::ledger_cost_report(engine)) {
      auto j = r.to_json();
      j["balance"] = engine.ledger().balance_of(r.stakeholder);
      out["actors"].push_back(std::move(j));
    }
    return out;
  }
  if (post && route({"did", "create"}, false)) {
    std::vector<identity::ServiceEntry> services;
    if (body.is_object() && body.contains("services")) {
      // The DID does not exist yet, so entries name their fragment alone:
      // {"id": "#event-1", "type": "EventMetadata", "serviceEndpoint": "..."}.
      for (const auto& s : body["services"]) {
        auto id = s.at("id").get<std::string>();
        if (id.size() < 2 || id.front() != '#') bad_request("service id must be '#fragment'");
        services.push_back({id.substr(1),
                            identity::service_type_from_string(s.at("type").get<std::string>()),
                            s.at("serviceEndpoint").get<std::string>()});
      }
    }
    identity::CreateOptions options;
    if (body.is_object() && body.contains("did")) options.did = Did::parse(string_field(body, "did"));
    return registry.create_did(actor.wallet, std::move(services), account, options)
        .resolution_json();
  }
  if (post && route({"did", "prepare"}, false)) {
    auto did = Did::parse(string_field(body, "did"));
    Bytes payload;
    if (body.value("deactivate", false)) {
      payload = registry.deactivation_payload(did);
    } else {
      payload = registry.signing_payload(did, DocumentDelta::from_json(field(body, "delta"), did));
    }
    return Json{{"payload", to_hex(payload)}};
  }
  if (post && route({"did", "update"}, false)) {
    auto did = Did::parse(string_field(body, "did"));
    auto delta = DocumentDelta::from_json(field(body, "delta"), did);
    auto signature = signature_of(body);
    if (!signature) {
      auto s = actor.wallet.sign(registry.signing_payload(did, delta));
      signature = Bytes(s.begin(), s.end());
    }
    return registry.update_did(did, delta, *signature, account).resolution_json();
  }
  if (post && route({"did", "deactivate"}, false)) {
    auto did = Did::parse(string_field(body, "did"));
    auto signature = signature_of(body);
    if (!signature) {
      auto s = actor.wallet.sign(registry.deactivation_payload(did));
      signature = Bytes(s.begin(), s.end());
    }
    return registry.deactivate_did(did, *signature, account).resolution_json();
  }
  if (post && route({"event"}, true)) {
    const auto& verb = parts[1];
    if (verb == "produce") {
      auto r = engine.produce(actor, attributes_of(body));
      return Json{{"did", r.did.text()}, {"cid", r.cid.text()}};
    }
    if (verb == "manufacture") {
      std::vector<Did> compartments;
      for (const auto& c : field(body, "compartments")) compartments.push_back(Did::parse(c.get<std::string>()));
      events::ManufactureOptions options;
      if (body.contains("mode")) options.commit_mode = events::commit_mode_from_string(string_field(body, "mode"));
      options.lean_receiving = body.value("lean", false);
      auto r = engine.manufacture(actor, compartments, attributes_of(body), options);
      return Json{{"did", r.did.text()}, {"cid", r.cid.text()}};
    }
    auto asset = Did::parse(string_field(body, "asset"));
    Cid cid;
    if (verb == "ship") {
      cid = engine.ship(actor, asset, resolve_actor_ref(string_field(body, "to")));
    } else if (verb == "receive") {
      cid = engine.receive(actor, asset);
    } else if (verb == "withdraw") {
      cid = engine.withdraw(actor, asset, body.value("reason", std::string()),
                            body.value("deactivate", false));
    } else {
      throw Error(ErrorCode::NotFound, "unknown event verb: " + verb);
    }
    return Json{{"did", asset.text()}, {"cid", cid.text()}};
  }
  throw Error(ErrorCode::NotFound, "no route for " + request.method + " " + request.path);
}

}  // namespace didchain::gateway
