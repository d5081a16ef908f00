#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gazectl/events.hpp"
#include "gazectl/types.hpp"

namespace gazectl {

/// Destination for synthesized input. Called from the engine loop thread only.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void send(const InputEvent& event) = 0;
  virtual void flush() {}
};

/// Collects events in memory. The default sink.
class VirtualSink : public EventSink {
 public:
  void send(const InputEvent& event) override { events_.push_back(event); }
  const std::vector<InputEvent>& events() const { return events_; }

 private:
  std::vector<InputEvent> events_;
};

/// Linux evdev record (struct input_event without the timestamp).
struct OsInputRecord {
  std::uint16_t type = 0;
  std::uint16_t code = 0;
  std::int32_t value = 0;

  bool operator==(const OsInputRecord&) const = default;
};

class OsInputBackend {
 public:
  virtual ~OsInputBackend() = default;
  virtual void write(std::span<const OsInputRecord> records) = 0;
};

/// Keeps translated records instead of injecting them.
class DryRunBackend : public OsInputBackend {
 public:
  void write(std::span<const OsInputRecord> records) override;
  const std::vector<OsInputRecord>& records() const { return records_; }

 private:
  std::vector<OsInputRecord> records_;
};

/// Injects through /dev/uinput. Absolute moves use an axis range matching
/// `screen`. Throws std::runtime_error when the device cannot be created.
class UinputBackend : public OsInputBackend {
 public:
  explicit UinputBackend(ScreenSize screen = {});
  ~UinputBackend() override;
  UinputBackend(const UinputBackend&) = delete;
  UinputBackend& operator=(const UinputBackend&) = delete;

  void write(std::span<const OsInputRecord> records) override;

 private:
  int fd_ = -1;
};

std::optional<std::uint16_t> linux_key_code(std::string_view key);

/// Translates InputEvents to evdev records. Events with no key mapping are
/// counted and dropped.
class OsSink : public EventSink {
 public:
  explicit OsSink(std::unique_ptr<OsInputBackend> backend);

  void send(const InputEvent& event) override;

  std::size_t untranslated() const { return untranslated_; }
  OsInputBackend& backend() { return *backend_; }

  static std::vector<OsInputRecord> translate(const InputEvent& event);

 private:
  std::unique_ptr<OsInputBackend> backend_;
  std::size_t untranslated_ = 0;
};

}  // namespace gazectl
