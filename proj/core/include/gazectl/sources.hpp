#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "gazectl/expected.hpp"

namespace gazectl {

/// A blocking producer of frame record lines. next_line returns nothing once
/// the source is exhausted or disconnected.
class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual std::optional<std::string> next_line() = 0;
};

class StreamLineSource : public LineSource {
 public:
  explicit StreamLineSource(std::istream& in) : in_(in) {}
  std::optional<std::string> next_line() override;

 private:
  std::istream& in_;
};

/// Listens on HOST:PORT, accepts a single client and reads its lines.
class TcpLineSource : public LineSource {
 public:
  static Expected<std::unique_ptr<TcpLineSource>, std::string> listen(const std::string& host,
                                                                      int port);
  ~TcpLineSource() override;

  std::optional<std::string> next_line() override;
  int port() const { return port_; }

 private:
  TcpLineSource(int listen_fd, int port) : listen_fd_(listen_fd), port_(port) {}

  int listen_fd_ = -1;
  int client_fd_ = -1;
  int port_ = 0;
  std::string buffer_;
  bool eof_ = false;
};

struct TcpEndpoint {
  std::string host;
  int port = 0;
};

/// Parses "tcp:HOST:PORT".
std::optional<TcpEndpoint> parse_tcp_endpoint(std::string_view spec);

/// "stdin" or "tcp:HOST:PORT".
Expected<std::unique_ptr<LineSource>, std::string> open_source(std::string_view spec,
                                                               std::istream& stdin_stream);

/// Fixed-capacity FIFO that discards its oldest element when full.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

  /// Returns true when an older element was dropped to make room.
  bool push(T value) {
    bool dropped = false;
    {
      std::lock_guard lock(mutex_);
      if (items_.size() >= capacity_) {
        items_.pop_front();
        ++dropped_;
        dropped = true;
      }
      items_.push_back(std::move(value));
    }
    ready_.notify_one();
    return dropped;
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    ready_.notify_all();
  }

  /// Blocks until an element is available; nothing once closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [this] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T value = std::move(items_.front());
    items_.pop_front();
    return value;
  }

  std::size_t take_dropped() {
    std::lock_guard lock(mutex_);
    return std::exchange(dropped_, 0);
  }

 private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<T> items_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

}  // namespace gazectl
