#include "coexplore/protocol_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <string>

namespace coex {

namespace {

nlohmann::json error_response(const std::string& message) {
  return {{"type", "error"}, {"message", message}};
}

}  // namespace

ProtocolServer::ProtocolServer(Coordinator& coord, int port) : coord_(coord) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(listen_fd_);
    throw std::runtime_error("bind() failed");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  if (::listen(listen_fd_, 16) < 0) {
    ::close(listen_fd_);
    throw std::runtime_error("listen() failed");
  }
}

ProtocolServer::~ProtocolServer() { stop(); }

void ProtocolServer::start() {
  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void ProtocolServer::stop() {
  if (!running_.exchange(false)) {
    if (listen_fd_ >= 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
    }
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (accept_thread_.joinable()) accept_thread_.join();
  std::lock_guard lock(clients_mutex_);
  for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
  for (std::thread& t : clients_)
    if (t.joinable()) t.join();
  clients_.clear();
  client_fds_.clear();
}

void ProtocolServer::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) break;
    std::lock_guard lock(clients_mutex_);
    client_fds_.push_back(fd);
    clients_.emplace_back([this, fd] { serve_client(fd); });
  }
}

void ProtocolServer::serve_client(int fd) {
  std::string buffer;
  char chunk[4096];
  while (running_) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = buffer.find('\n')) != std::string::npos) {
      const std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (line.empty()) continue;
      nlohmann::json response;
      try {
        response = handle(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        response = error_response(std::string("bad request: ") + e.what());
      }
      const std::string out = response.dump() + "\n";
      if (::send(fd, out.data(), out.size(), MSG_NOSIGNAL) < 0) break;
    }
  }
  ::close(fd);
}

nlohmann::json ProtocolServer::handle(const nlohmann::json& request) {
  const std::string type = request.value("type", "");
  try {
    if (type == "register") {
      const int id = request.at("agent").get<int>();
      coord_.register_agent(id, Transform2D::identity());
      Pose2D pose{request.value("x", 0.0), request.value("y", 0.0),
                  request.value("theta", 0.0)};
      coord_.update_agent_state(id, pose, nullptr);
      return {{"type", "ack"}};
    }
    if (type == "submit_frontiers") {
      const int id = request.at("agent").get<int>();
      if (request.contains("x")) {
        Pose2D pose{request.at("x").get<double>(),
                    request.at("y").get<double>(),
                    request.value("theta", 0.0)};
        coord_.update_agent_state(id, pose, nullptr);
      }
      std::vector<FrontierPoint> points;
      for (const auto& p : request.at("points"))
        points.push_back({{p.at(0).get<double>(), p.at(1).get<double>()}, id});
      coord_.submit_frontiers(id, points, tick_);
      return {{"type", "ack"}};
    }
    if (type == "request_goal") {
      const int id = request.at("agent").get<int>();
      const int tick = tick_++;
      coord_.request_goal(id, tick);
      const std::vector<Assignment> assigned = coord_.decide(tick);
      for (const Assignment& a : assigned)
        if (a.agent == id)
          return {{"type", "goal_assignment"}, {"x", a.goal.x}, {"y", a.goal.y}};
      return {{"type", "no_candidates"}};
    }
    if (type == "report_status") {
      const int id = request.at("agent").get<int>();
      const std::string status = request.at("status").get<std::string>();
      if (status != "reached" && status != "abandoned")
        return error_response("status must be reached or abandoned");
      coord_.report_goal_status(
          id, status == "reached" ? GoalStatus::Reached : GoalStatus::Abandoned,
          tick_);
      return {{"type", "ack"}};
    }
    return error_response("unknown request type: " + type);
  } catch (const std::exception& e) {
    return error_response(e.what());
  }
}

}  // namespace coex
