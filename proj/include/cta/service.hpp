#pragma once

#include <memory>
#include <string>

#include "cta/gateway.hpp"

namespace cta::gateway {

/// HTTP/1.1 front of a Gateway.
class Service {
 public:
  explicit Service(GatewayConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the bound
  /// port, or -1 when binding failed.
  int bind(const std::string& host, int port);

  /// Serves until stop(). Requires a successful bind().
  void run();
  /// bind() + run() on a background thread. Returns the bound port or -1.
  int start(const std::string& host, int port);
  /// Stops accepting connections; in-flight requests are finished first.
  void stop();

  Gateway& gateway() noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cta::gateway
