#include "cta/service.hpp"

#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace cta::gateway {

struct Service::Impl {
  Gateway gateway;
  httplib::Server server;
  std::thread worker;

  explicit Impl(GatewayConfig config) : gateway(std::move(config)) {
    // SO_REUSEADDR only: the library default (SO_REUSEPORT) lets a second
    // server bind a port that is already in use.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    routes();
  }

  static void send(httplib::Response& res, Reply reply) {
    res.status = reply.status;
    for (auto& [k, v] : reply.headers) res.set_header(k, v);
    res.set_content(std::move(reply.body), reply.content_type);
  }

  void routes() {
    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) { send(res, gateway.health()); });

    server.Post("/inpaint", [this](const httplib::Request& req, httplib::Response& res) {
      const auto received = Clock::now();
      send(res, gateway.inpaint(req.get_param_value("uid"), req.get_param_value("engine"), req.body, received));
    });

    server.Post("/volumes", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, gateway.upload_volume(req.body));
    });

    server.Get(R"(/volumes/([^/]+)/slices/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, gateway.get_slice(req.matches[1].str(), req.matches[2].str(), req.get_param_value("window"),
                                  req.get_param_value("level")));
    });

    server.Post(R"(/volumes/([^/]+)/slices/([^/]+)/patch)", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, gateway.apply_patch(req.matches[1].str(), req.matches[2].str(), req.body));
    });

    server.Get(R"(/volumes/([^/]+)/download)", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, gateway.download_volume(req.matches[1].str()));
    });

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      res.status = 500;
      res.set_content("{\"error\":" + nlohmann::json(what).dump() + "}", "application/json");
    });
  }
};

Service::Service(GatewayConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() {
  stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void Service::run() { impl_->server.listen_after_bind(); }

int Service::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  if (bound < 0) return bound;
  impl_->worker = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Service::stop() { impl_->server.stop(); }

Gateway& Service::gateway() noexcept { return impl_->gateway; }

}  // namespace cta::gateway
