#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "coexplore/coordinator.hpp"

namespace coex {

// Line-delimited JSON protocol over a local TCP socket, so the coordinator
// can run as a separate process. Requests: register, submit_frontiers,
// request_goal, report_status. Responses: ack, goal_assignment{x, y},
// no_candidates, error{message}.
class ProtocolServer {
 public:
  // port 0 binds an ephemeral port (see port() after construction).
  ProtocolServer(Coordinator& coord, int port);
  ~ProtocolServer();

  ProtocolServer(const ProtocolServer&) = delete;
  ProtocolServer& operator=(const ProtocolServer&) = delete;

  int port() const { return port_; }
  void start();
  void stop();

  // One request -> one response line. Exposed for direct testing.
  nlohmann::json handle(const nlohmann::json& request);

 private:
  void accept_loop();
  void serve_client(int fd);

  Coordinator& coord_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> running_{false};
  std::atomic<int> tick_{0};
  std::thread accept_thread_;
  std::vector<std::thread> clients_;
  std::vector<int> client_fds_;
  std::mutex clients_mutex_;
};

}  // namespace coex
