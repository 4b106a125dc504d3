#include "didchain/gateway/service.hpp"

#include <httplib.h>

#include <thread>

namespace didchain::gateway {

struct Server::Impl {
  httplib::Server http;
  std::thread worker;
};

namespace {

ApiRequest to_api(const httplib::Request& req) {
  ApiRequest api;
  api.method = req.method;
  api.path = req.path;
  for (const auto& [k, v] : req.params) api.query[k] = v;
  auto auth = req.get_header_value("Authorization");
  constexpr std::string_view bearer = "Bearer ";
  if (auth.compare(0, bearer.size(), bearer) == 0) {
    api.token = auth.substr(bearer.size());
  }
  if (!req.body.empty()) api.body = Json::parse(req.body);
  return api;
}

}  // namespace

Server::Server(Service& service, std::string host, int port)
    : impl_(std::make_unique<Impl>()), host_(std::move(host)), port_(port) {
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    ApiResponse out;
    try {
      out = service.handle(to_api(req));
    } catch (const Json::exception& e) {
      out = {400, Json{{"error_code", "BadRequest"}, {"message", e.what()}}};
    }
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  // httplib also sets SO_REUSEPORT by default, which would let a second
  // server share a port that is already in use.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  impl_->http.Get(".*", handler);
  impl_->http.Post(".*", handler);
}

Server::~Server() { stop(); }

void Server::start() {
  if (port_ == 0) {
    bound_port_ = impl_->http.bind_to_any_port(host_);
  } else {
    bound_port_ = impl_->http.bind_to_port(host_, port_) ? port_ : -1;
  }
  if (bound_port_ <= 0) {
    throw Error(ErrorCode::BindFailure, "cannot bind " + host_ + ":" + std::to_string(port_));
  }
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

void Server::wait() {
  while (impl_->http.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
}

}  // namespace didchain::gateway
