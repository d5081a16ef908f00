#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "gazectl/engine.hpp"
#include "gazectl/event_log.hpp"
#include "gazectl/expected.hpp"
#include "gazectl/sinks.hpp"
#include "gazectl/snapshot.hpp"
#include "gazectl/sources.hpp"

namespace gazectl {

enum class ReplaySpeed { kMax, kRealtime };

struct StreamOptions {
  EventSink* sink = nullptr;
  SnapshotSink* snapshots = nullptr;
};

struct StreamStats {
  std::size_t lines = 0;
  std::size_t frames = 0;
  std::size_t rejected = 0;
  std::int64_t step_ns = 0;  // wall time spent inside Engine::step

  double mean_step_ms() const {
    return frames == 0 ? 0.0 : static_cast<double>(step_ns) / 1e6 / static_cast<double>(frames);
  }
};

/// Feeds record lines through an engine: decode, stream-level timestamp
/// check, step, then log + sink + snapshot. Bad lines become diagnostics.
class StreamDriver {
 public:
  StreamDriver(Engine& engine, StreamOptions options = {});

  /// Returns the decoded frame's timestamp when the line was accepted.
  std::optional<std::int64_t> handle_line(std::string_view line);
  void note(std::string message);
  void finish();

  const EventLog& log() const { return log_; }
  EventLog take_log() { return std::move(log_); }
  const StreamStats& stats() const { return stats_; }

 private:
  void emit(const std::vector<InputEvent>& events);

  Engine& engine_;
  StreamOptions options_;
  EventLog log_;
  StreamStats stats_;
  bool finished_ = false;
};

struct ReplayOptions {
  ReplaySpeed speed = ReplaySpeed::kMax;
  StreamOptions stream;
};

EventLog run_replay(std::istream& trace, Engine& engine, const ReplayOptions& options = {},
                    StreamStats* stats = nullptr);

Expected<EventLog, std::string> run_replay_file(const std::string& path, Engine& engine,
                                                const ReplayOptions& options = {},
                                                StreamStats* stats = nullptr);

struct LiveOptions {
  std::size_t queue_capacity = 64;
  StreamOptions stream;
  std::ostream* record_to = nullptr;  // verbatim copy of accepted lines
};

/// Reader thread pulls lines into a drop-oldest queue; the calling thread
/// runs the engine loop until the source is exhausted.
EventLog run_live(LineSource& source, Engine& engine, const LiveOptions& options = {},
                  StreamStats* stats = nullptr);

/// Appends every line that decodes to a frame, verbatim, to `out`.
/// Returns the number of frames written.
std::size_t record(LineSource& source, std::ostream& out);

}  // namespace gazectl
