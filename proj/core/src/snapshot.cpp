#include "gazectl/snapshot.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <ostream>

#include <nlohmann/json.hpp>

namespace gazectl {

std::string encode_snapshot(const EngineSnapshot& s) {
  nlohmann::ordered_json j;
  j["t_ms"] = s.t_ms;
  j["mode"] = s.mode;
  j["cursor_mode"] = std::string(to_string(s.cursor_mode));
  j["cursor"] = s.cursor ? nlohmann::ordered_json::array({s.cursor->x, s.cursor->y}) : nlohmann::ordered_json();
  j["dwell"] = {{"remaining_ms", s.dwell_remaining_ms}, {"total_ms", s.dwell_total_ms}};
  j["active"] = s.active;
  if (s.wheel) {
    nlohmann::ordered_json w;
    w["owner"] = s.wheel->owner;
    w["layout"] = s.wheel->spec.layout == LayoutType::kSquare ? "square" : "radial";
    auto items = nlohmann::ordered_json::array();
    for (const auto& item : s.wheel->spec.items) items.push_back(item.token);
    w["items"] = std::move(items);
    w["columns"] = s.wheel->geometry.columns;
    w["rows"] = s.wheel->geometry.rows;
    auto geometry = nlohmann::ordered_json::array();
    for (const auto& sector : s.wheel->geometry.sectors) geometry.push_back({sector.center_deg, sector.width_deg});
    for (const auto& cell : s.wheel->geometry.cells) geometry.push_back({cell.u0, cell.v0, cell.u1, cell.v1});
    w["geometry"] = std::move(geometry);
    w["highlighted"] = s.wheel->highlighted ? nlohmann::ordered_json(*s.wheel->highlighted) : nlohmann::ordered_json();
    j["wheel"] = std::move(w);
  } else {
    j["wheel"] = nullptr;
  }
  return j.dump();
}

void StreamSnapshotWriter::publish(const EngineSnapshot& snapshot) { out_ << encode_snapshot(snapshot) << '\n'; }

Expected<std::unique_ptr<TcpSnapshotBroadcaster>, std::string> TcpSnapshotBroadcaster::listen(const std::string& host,
                                                                                              int port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result); rc != 0) {
    return unexpected(std::string("cannot resolve ") + host + ": " + ::gai_strerror(rc));
  }
  const int fd = ::socket(result->ai_family, result->ai_socktype, result->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(result);
    return unexpected(std::string("socket: ") + std::strerror(errno));
  }
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  const bool bound = ::bind(fd, result->ai_addr, result->ai_addrlen) == 0;
  ::freeaddrinfo(result);
  if (!bound || ::listen(fd, 8) != 0) {
    const std::string message = std::strerror(errno);
    ::close(fd);
    return unexpected("cannot listen on " + host + ":" + service + ": " + message);
  }
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return std::unique_ptr<TcpSnapshotBroadcaster>(new TcpSnapshotBroadcaster(fd, ntohs(addr.sin_port)));
}

TcpSnapshotBroadcaster::TcpSnapshotBroadcaster(int listen_fd, int port) : listen_fd_(listen_fd), port_(port) {
  acceptor_ = std::thread([this] { accept_loop(); });
}

TcpSnapshotBroadcaster::~TcpSnapshotBroadcaster() {
  stopping_ = true;
  ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  std::lock_guard lock(mutex_);
  for (int fd : clients_) ::close(fd);
}

void TcpSnapshotBroadcaster::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    std::lock_guard lock(mutex_);
    clients_.push_back(fd);
  }
}

void TcpSnapshotBroadcaster::publish(const EngineSnapshot& snapshot) {
  const std::string line = encode_snapshot(snapshot) + "\n";
  std::lock_guard lock(mutex_);
  auto dead = [&](int fd) {
    const ssize_t n = ::send(fd, line.data(), line.size(), MSG_NOSIGNAL | MSG_DONTWAIT);
    if (n == static_cast<ssize_t>(line.size())) return false;
    ::close(fd);
    return true;
  };
  clients_.erase(std::remove_if(clients_.begin(), clients_.end(), dead), clients_.end());
}

std::size_t TcpSnapshotBroadcaster::subscribers() const {
  std::lock_guard lock(mutex_);
  return clients_.size();
}

}  // namespace gazectl
