#pragma once

#include <memory>
#include <string>
#include <thread>

#include "faithsum/scorers.hpp"

namespace faithsum {

// Serves any Backend over the scoring wire protocol (see RemoteBackend).
// Bad requests answer 400, backend failures 500, both as {"error": "..."}.
class WireServer {
 public:
  explicit WireServer(std::shared_ptr<const Backend> backend);
  ~WireServer();

  WireServer(const WireServer&) = delete;
  WireServer& operator=(const WireServer&) = delete;

  // Binds `host:port` (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);

  // Serves until stop(); requires bind().
  void listen();

  // bind() + listen() on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace faithsum
