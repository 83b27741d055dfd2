#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "jambeam/gateway.hpp"

namespace jambeam {

// HTTP + WebSocket front end for a SessionManager. All sockets are served by
// one io thread, so requests are handled strictly in arrival order.
class GatewayServer {
 public:
  // Port 0 picks a free port; see port().
  GatewayServer(SessionManager& manager, const std::string& address, std::uint16_t port);
  ~GatewayServer();

  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  void start();
  // Blocks until stop() or a signal handler stops the io loop.
  void run();
  void stop();
  std::uint16_t port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace jambeam
