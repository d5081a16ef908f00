#include "gazectl/sources.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <istream>

namespace gazectl {

std::optional<std::string> StreamLineSource::next_line() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

Expected<std::unique_ptr<TcpLineSource>, std::string> TcpLineSource::listen(const std::string& host, int port) {
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
  if (!bound || ::listen(fd, 1) != 0) {
    const std::string message = std::strerror(errno);
    ::close(fd);
    return unexpected("cannot listen on " + host + ":" + service + ": " + message);
  }
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return std::unique_ptr<TcpLineSource>(new TcpLineSource(fd, ntohs(addr.sin_port)));
}

TcpLineSource::~TcpLineSource() {
  if (client_fd_ >= 0) ::close(client_fd_);
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::optional<std::string> TcpLineSource::next_line() {
  if (client_fd_ < 0 && !eof_) {
    client_fd_ = ::accept(listen_fd_, nullptr, nullptr);
    if (client_fd_ < 0) eof_ = true;
  }
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (eof_) {
      if (buffer_.empty()) return std::nullopt;
      return std::exchange(buffer_, {});
    }
    char chunk[4096];
    const ssize_t n = ::recv(client_fd_, chunk, sizeof(chunk), 0);
    if (n > 0) {
      buffer_.append(chunk, static_cast<std::size_t>(n));
    } else if (n < 0 && errno == EINTR) {
      continue;
    } else {
      eof_ = true;
    }
  }
}

std::optional<TcpEndpoint> parse_tcp_endpoint(std::string_view spec) {
  constexpr std::string_view prefix = "tcp:";
  if (!spec.starts_with(prefix)) return std::nullopt;
  spec.remove_prefix(prefix.size());
  const auto colon = spec.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  TcpEndpoint ep;
  ep.host = std::string(spec.substr(0, colon));
  const auto port_text = spec.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), ep.port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || ep.port < 0 || ep.port > 65535) {
    return std::nullopt;
  }
  return ep;
}

Expected<std::unique_ptr<LineSource>, std::string> open_source(std::string_view spec, std::istream& stdin_stream) {
  if (spec == "stdin") return std::unique_ptr<LineSource>(std::make_unique<StreamLineSource>(stdin_stream));
  const auto ep = parse_tcp_endpoint(spec);
  if (!ep) return unexpected("source must be 'stdin' or 'tcp:HOST:PORT', got '" + std::string(spec) + "'");
  auto tcp = TcpLineSource::listen(ep->host, ep->port);
  if (!tcp) return unexpected(tcp.error());
  return std::unique_ptr<LineSource>(std::move(*tcp));
}

}  // namespace gazectl
