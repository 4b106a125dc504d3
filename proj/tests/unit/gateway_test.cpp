#include "didchain/common/error.hpp"
#include "didchain/events/scenario.hpp"
#include "didchain/gateway/service.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <cstdlib>

namespace didchain::gateway {
namespace {

AccountConfig internal(const std::string& alias, events::Role role) {
  AccountConfig a;
  a.alias = alias;
  a.role = role;
  a.seed = events::seed_from_label(alias);
  a.balance = 1000;
  a.token = alias + "-token";
  return a;
}

GatewayConfig dairy_config() {
  GatewayConfig c;
  c.engine = testing::fixed_config();
  using events::Role;
  c.accounts = {internal("farm", Role::Producer), internal("carrier", Role::Supplier),
                internal("cheesery", Role::Manufacturer), internal("shop", Role::Retailer)};
  AccountConfig app;
  app.alias = "app";
  app.role = Role::Retailer;
  app.mode = identity::SecretMode::ClientManagedSecret;
  app.key = identity::KeyPair::from_seed(events::seed_from_label("app")).public_key();
  app.balance = 500;
  app.token = "app-token";
  c.accounts.push_back(app);
  return c;
}

ApiResponse call(Service& s, const std::string& method, const std::string& path,
                 const std::optional<std::string>& token = std::nullopt, Json body = nullptr) {
  ApiRequest r;
  r.method = method;
  r.path = path;
  r.token = token;
  r.body = std::move(body);
  return s.handle(r);
}

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(http_status(ErrorCode::InvalidToken), 401);
  EXPECT_EQ(http_status(ErrorCode::Unauthorized), 403);
  EXPECT_EQ(http_status(ErrorCode::NotFound), 404);
  EXPECT_EQ(http_status(ErrorCode::WrongState), 409);
  EXPECT_EQ(http_status(ErrorCode::PayloadTooLarge), 413);
  EXPECT_EQ(http_status(ErrorCode::InsufficientBalance), 422);
  EXPECT_EQ(http_status(ErrorCode::MalformedDid), 400);
}

TEST(Service, EventFlowAndReads) {
  Service s(dairy_config());
  auto made = call(s, "POST", "/event/produce", "farm-token", {{"attributes", {{"kg", "5"}}}});
  ASSERT_EQ(made.status, 200) << made.body;
  auto did = made.body["result"]["did"].get<std::string>();
  EXPECT_EQ(call(s, "POST", "/event/ship", "farm-token", {{"asset", did}, {"to", "carrier"}}).status,
            200);
  EXPECT_EQ(call(s, "POST", "/event/receive", "carrier-token", {{"asset", did}}).status, 200);

  auto search = call(s, "GET", "/did/search/" + did);
  ASSERT_EQ(search.status, 200);
  const auto& res = search.body["result"];
  EXPECT_EQ(res["didDocument"]["id"], did);
  EXPECT_TRUE(res["didDocumentMetadata"].contains("versionId"));
  EXPECT_TRUE(res["didDocument"]["service"].is_array());

  auto versions = call(s, "GET", "/did/versions/" + did);
  ASSERT_EQ(versions.body["result"].size(), 3u);
  auto first = versions.body["result"][0]["versionId"].get<std::string>();
  ApiRequest pinned{"GET", "/did/search/" + did, nullptr, std::nullopt, {{"versionId", first}}};
  EXPECT_EQ(s.handle(pinned).body["result"]["didDocumentMetadata"]["versionId"], first);

  auto list = call(s, "GET", "/did/list", "farm-token");
  EXPECT_EQ(list.body["result"], Json::array({did}));
  auto trace = call(s, "GET", "/trace/" + did);
  EXPECT_EQ(trace.body["result"]["totalEvents"], 3);
  EXPECT_EQ(trace.body["result"]["resolutionCount"], 6);
  EXPECT_EQ(call(s, "GET", "/track/" + did).body["result"]["status"], "Received");
  auto cost = call(s, "GET", "/cost/report", "farm-token");
  bool seen_farm = false;
  for (const auto& a : cost.body["result"]["actors"]) {
    if (a["stakeholder"] == "farm") {
      seen_farm = true;
      EXPECT_EQ(a["totalCt"], 75);
      EXPECT_EQ(a["balance"], 925);
    }
  }
  EXPECT_TRUE(seen_farm);
}

TEST(Service, ErrorsCarryCodes) {
  Service s(dairy_config());
  auto no_token = call(s, "GET", "/did/list");
  EXPECT_EQ(no_token.status, 401);
  EXPECT_EQ(no_token.body["error_code"], "InvalidToken");
  EXPECT_EQ(call(s, "GET", "/did/list", "wrong").status, 401);
  auto missing = call(s, "GET", "/did/search/did:chain:nothing");
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(missing.body["error_code"], "NotFound");
  EXPECT_TRUE(missing.body.contains("message"));
  EXPECT_EQ(call(s, "GET", "/did/search/garbage").body["error_code"], "MalformedDid");
  EXPECT_EQ(call(s, "POST", "/event/produce", "shop-token").body["error_code"], "WrongRole");
  EXPECT_EQ(call(s, "GET", "/nowhere").status, 404);
  EXPECT_EQ(call(s, "POST", "/event/ship", "farm-token", {{"to", "carrier"}}).status, 400);
}

TEST(Service, RawDidOperations) {
  Service s(dairy_config());
  Json create{{"services", {{{"id", "#event-1"},
                             {"type", "EventMetadata"},
                             {"serviceEndpoint", Cid::of("x").text()}}}}};
  auto created = call(s, "POST", "/did/create", "shop-token", create);
  ASSERT_EQ(created.status, 200) << created.body;
  auto did_text = created.body["result"]["didDocument"]["id"].get<std::string>();
  auto did = identity::Did::parse(did_text);
  identity::DocumentDelta delta;
  delta.add_services = {{"status", identity::ServiceType::Status, "active"}};
  auto updated = call(s, "POST", "/did/update", "shop-token",
                      {{"did", did_text}, {"delta", delta.to_json(did)}});
  ASSERT_EQ(updated.status, 200) << updated.body;
  EXPECT_EQ(call(s, "GET", "/did/versions/" + did_text).body["result"].size(), 2u);
  // Another account cannot sign for this DID.
  auto foreign = call(s, "POST", "/did/deactivate", "farm-token", {{"did", did_text}});
  EXPECT_EQ(foreign.body["error_code"], "Unauthorized");
  auto gone = call(s, "POST", "/did/deactivate", "shop-token", {{"did", did_text}});
  EXPECT_EQ(gone.body["result"]["didDocumentMetadata"]["deactivated"], true);
  EXPECT_EQ(s.engine().ledger().balance_of("shop"), 1000u - 50 - 25 - 25);
}

TEST(Service, ClientManagedPrepareAndSign) {
  Service s(dairy_config());
  auto created = call(s, "POST", "/did/create", "app-token", Json::object());
  ASSERT_EQ(created.status, 200) << created.body;
  auto did_text = created.body["result"]["didDocument"]["id"].get<std::string>();
  identity::DocumentDelta delta;
  delta.add_services = {{"status", identity::ServiceType::Status, "active"}};
  auto delta_json = delta.to_json(identity::Did::parse(did_text));

  auto refused = call(s, "POST", "/did/update", "app-token", {{"did", did_text}, {"delta", delta_json}});
  EXPECT_EQ(refused.body["error_code"], "ServerSideSigningRefused");

  auto prepared = call(s, "POST", "/did/prepare", "app-token", {{"did", did_text}, {"delta", delta_json}});
  auto payload = from_hex(prepared.body["result"]["payload"].get<std::string>());
  auto key = identity::KeyPair::from_seed(events::seed_from_label("app"));
  auto sig = key.sign(payload);
  auto forged = sig;
  forged[0] ^= 1;
  auto bad = call(s, "POST", "/did/update", "app-token",
                  {{"did", did_text}, {"delta", delta_json}, {"signature", to_hex(forged)}});
  EXPECT_EQ(bad.body["error_code"], "Unauthorized");
  auto ok = call(s, "POST", "/did/update", "app-token",
                 {{"did", did_text}, {"delta", delta_json}, {"signature", to_hex(sig)}});
  EXPECT_EQ(ok.status, 200) << ok.body;
}

TEST(GatewayConfig, ParsesAndRejects) {
  auto j = parse_json(R"({"bind": "0.0.0.0:9000", "seed": 4,
      "ledger": {"fees": {"create": 10}}, "maxCompartmentsPerTx": 39,
      "accounts": [{"alias": "farm", "role": "Producer", "seed": ")" +
                      std::string(64, '1') + R"(", "balance": 5, "token": "t"}]})");
  auto c = GatewayConfig::from_json(j);
  EXPECT_EQ(c.host, "0.0.0.0");
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.engine.ledger.fees.create_fee, 10u);
  EXPECT_EQ(c.engine.max_compartments_per_tx, 39u);
  ASSERT_EQ(c.accounts.size(), 1u);
  for (const char* bad : {R"([])", R"({"bind": "nope"})",
                          R"({"accounts": [{"alias": "x", "role": "Wizard", "balance": 1, "token": "t"}]})"}) {
    try {
      GatewayConfig::from_json(parse_json(bad));
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid) << bad;
    }
  }
}

TEST(Server, ServesOverHttp) {
  Service s(dairy_config());
  Server server(s, "127.0.0.1", 0);
  server.start();
  ASSERT_GT(server.port(), 0);
  httplib::Client client("127.0.0.1", server.port());
  httplib::Headers auth{{"Authorization", "Bearer farm-token"}};
  auto made = client.Post("/event/produce", auth, "{}", "application/json");
  ASSERT_TRUE(made);
  ASSERT_EQ(made->status, 200) << made->body;
  auto did = parse_json(made->body)["result"]["did"].get<std::string>();
  auto search = client.Get("/did/search/" + did);
  ASSERT_TRUE(search);
  EXPECT_EQ(search->status, 200);
  EXPECT_EQ(parse_json(search->body)["result"]["didDocument"]["id"], did);
  auto list = client.Get("/did/list");
  EXPECT_EQ(list->status, 401);
  EXPECT_EQ(parse_json(list->body)["error_code"], "InvalidToken");
  server.stop();

  Server again(s, "127.0.0.1", 0);
  again.start();
  Server clash(s, "127.0.0.1", again.port());
  try {
    clash.start();
    ADD_FAILURE() << "second bind succeeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BindFailure);
  }
  again.stop();
}

}  // namespace
}  // namespace didchain::gateway
