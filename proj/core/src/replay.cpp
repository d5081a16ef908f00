#include "gazectl/replay.hpp"

#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "gazectl/frame_codec.hpp"

namespace gazectl {

namespace {

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

StreamDriver::StreamDriver(Engine& engine, StreamOptions options) : engine_(engine), options_(options) {}

std::optional<std::int64_t> StreamDriver::handle_line(std::string_view line) {
  if (blank(line)) return std::nullopt;
  ++stats_.lines;
  const std::int64_t last = engine_.last_t_ms().value_or(0);

  auto frame = decode_frame(line);
  if (!frame) {
    ++stats_.rejected;
    log_.diagnostic(last, "rejected frame: " + frame.error().describe());
    return std::nullopt;
  }
  if (engine_.last_t_ms() && frame->t_ms < *engine_.last_t_ms()) {
    ++stats_.rejected;
    log_.diagnostic(last, "rejected frame: t_ms " + std::to_string(frame->t_ms) + " is earlier than " +
                              std::to_string(last));
    return std::nullopt;
  }

  const auto start = std::chrono::steady_clock::now();
  const auto events = engine_.step(*frame);
  stats_.step_ns += std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
  ++stats_.frames;

  emit(events);
  if (options_.snapshots) options_.snapshots->publish(engine_.snapshot());
  return frame->t_ms;
}

void StreamDriver::note(std::string message) { log_.diagnostic(engine_.last_t_ms().value_or(0), std::move(message)); }

void StreamDriver::finish() {
  if (finished_) return;
  finished_ = true;
  emit(engine_.finish(engine_.last_t_ms().value_or(0)));
  if (options_.sink) options_.sink->flush();
}

void StreamDriver::emit(const std::vector<InputEvent>& events) {
  for (const auto& e : events) {
    log_.append(e);
    if (options_.sink) options_.sink->send(e);
  }
}

EventLog run_replay(std::istream& trace, Engine& engine, const ReplayOptions& options, StreamStats* stats) {
  StreamDriver driver(engine, options.stream);
  std::optional<std::int64_t> first_t;
  const auto wall_start = std::chrono::steady_clock::now();
  std::string line;
  while (std::getline(trace, line)) {
    const auto t = driver.handle_line(line);
    if (!t || options.speed != ReplaySpeed::kRealtime) continue;
    if (!first_t) first_t = *t;
    std::this_thread::sleep_until(wall_start + std::chrono::milliseconds(*t - *first_t));
  }
  driver.finish();
  if (stats) *stats = driver.stats();
  return driver.take_log();
}

Expected<EventLog, std::string> run_replay_file(const std::string& path, Engine& engine, const ReplayOptions& options,
                                                StreamStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected("cannot open trace " + path);
  return run_replay(in, engine, options, stats);
}

EventLog run_live(LineSource& source, Engine& engine, const LiveOptions& options, StreamStats* stats) {
  BoundedQueue<std::string> queue(options.queue_capacity);
  std::thread reader([&] {
    while (auto line = source.next_line()) queue.push(std::move(*line));
    queue.close();
  });

  StreamDriver driver(engine, options.stream);
  while (auto line = queue.pop()) {
    if (const auto dropped = queue.take_dropped(); dropped > 0) {
      driver.note("dropped " + std::to_string(dropped) + " frame(s): engine behind source");
    }
    if (driver.handle_line(*line) && options.record_to) *options.record_to << *line << '\n';
  }
  reader.join();
  driver.finish();
  if (stats) *stats = driver.stats();
  return driver.take_log();
}

std::size_t record(LineSource& source, std::ostream& out) {
  std::size_t frames = 0;
  while (auto line = source.next_line()) {
    if (!decode_frame(*line)) continue;
    out << *line << '\n';
    ++frames;
  }
  out.flush();
  return frames;
}

}  // namespace gazectl
