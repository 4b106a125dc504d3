#pragma once

#include "didchain/common/canonical_json.hpp"
#include "didchain/common/error.hpp"
#include "didchain/events/supply_chain.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace didchain::gateway {

struct ApiRequest {
  std::string method;  // "GET" or "POST"
  std::string path;    // "/did/search/did:chain:..."
  Json body;           // null when absent
  std::optional<std::string> token;
  std::map<std::string, std::string> query;
};

// Success: {"result": ...}. Failure: {"error_code": name, "message": text}.
struct ApiResponse {
  int status = 200;
  Json body;
};

int http_status(ErrorCode code) noexcept;

struct AccountConfig {
  std::string alias;
  events::Role role = events::Role::Producer;
  identity::SecretMode mode = identity::SecretMode::InternalSecret;
  Bytes seed;                              // internal accounts
  std::optional<identity::PublicKey> key;  // client-managed accounts
  ledger::TokenAmount balance = 0;
  std::string token;
};

// {
//   "bind": "127.0.0.1:8080",
//   "dataDir": "/var/lib/didchain",
//   "seed": 1, "clockStart": "2024-03-05T00:00:00.000Z",
//   "ledger": {"blockSizeLimit": 204800, "tokenPriceUsd": 0.117,
//              "fees": {"create": 50, "update": 25, "deactivate": 25}},
//   "maxCompartmentsPerTx": 39,
//   "circularReuse": false,
//   "accounts": [{"alias": "farm", "role": "Producer", "mode": "internal",
//                 "seed": "<64 hex>", "balance": 1000, "token": "farm-secret"},
//                {"alias": "app", "role": "Retailer", "mode": "client-managed",
//                 "publicKey": "<64 hex>", "balance": 500, "token": "app-secret"}]
// }
struct GatewayConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  events::EngineConfig engine;
  std::vector<AccountConfig> accounts;

  // Throws Error(ConfigInvalid).
  static GatewayConfig from_json(const Json& j);
  // Reads the file, then applies DIDCHAIN_BIND ("host:port") and
  // DIDCHAIN_DATA_DIR from the environment.
  static GatewayConfig load(const std::filesystem::path& path);
  void apply_environment();
};

// Transport-independent request handler. Thread-safe.
class Service {
 public:
  explicit Service(GatewayConfig config);

  ApiResponse handle(const ApiRequest& request);

  events::SupplyChain& engine() noexcept { return *engine_; }
  const GatewayConfig& config() const noexcept { return config_; }

  // Throws Error(InvalidToken).
  const events::Actor& authenticate(const ApiRequest& request) const;

 private:
  Json dispatch(const ApiRequest& request);

  GatewayConfig config_;
  std::unique_ptr<events::SupplyChain> engine_;
  std::map<std::string, std::string> tokens_;  // token -> alias
};

// HTTP binding of a Service on a background thread pool.
class Server {
 public:
  Server(Service& service, std::string host, int port);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving. Port 0 picks a free port. Throws
  // Error(BindFailure).
  void start();
  int port() const noexcept { return bound_port_; }
  // Stops accepting, finishes in-flight requests and joins the worker.
  void stop();
  // Blocks until stop() is called from another thread.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_;
  int bound_port_ = 0;
};

}  // namespace didchain::gateway
