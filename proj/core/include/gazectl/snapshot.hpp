#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gazectl/cursor.hpp"
#include "gazectl/expected.hpp"
#include "gazectl/wheel.hpp"

namespace gazectl {

/// Read-only view of the engine for the overlay, published once per frame.
struct EngineSnapshot {
  std::int64_t t_ms = 0;
  std::string mode;
  CursorMode cursor_mode = CursorMode::kAbsolute;
  std::optional<ScreenPoint> cursor;
  std::int64_t dwell_remaining_ms = 0;
  std::int64_t dwell_total_ms = 0;
  std::vector<std::string> active;
  std::optional<OpenWheel> wheel;
};

std::string encode_snapshot(const EngineSnapshot& snapshot);

class SnapshotSink {
 public:
  virtual ~SnapshotSink() = default;
  virtual void publish(const EngineSnapshot& snapshot) = 0;
};

/// Writes one JSON line per snapshot.
class StreamSnapshotWriter : public SnapshotSink {
 public:
  explicit StreamSnapshotWriter(std::ostream& out) : out_(out) {}
  void publish(const EngineSnapshot& snapshot) override;

 private:
  std::ostream& out_;
};

/// Accepts any number of local subscribers and sends every snapshot line to
/// each. Slow or closed subscribers are dropped, never waited on.
class TcpSnapshotBroadcaster : public SnapshotSink {
 public:
  static Expected<std::unique_ptr<TcpSnapshotBroadcaster>, std::string> listen(
      const std::string& host, int port);
  ~TcpSnapshotBroadcaster() override;

  void publish(const EngineSnapshot& snapshot) override;
  int port() const { return port_; }
  std::size_t subscribers() const;

 private:
  TcpSnapshotBroadcaster(int listen_fd, int port);
  void accept_loop();

  int listen_fd_;
  int port_;
  mutable std::mutex mutex_;
  std::vector<int> clients_;
  std::thread acceptor_;
  std::atomic<bool> stopping_{false};
};

}  // namespace gazectl
