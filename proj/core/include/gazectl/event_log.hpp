#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "gazectl/events.hpp"

namespace gazectl {

struct Diagnostic {
  std::int64_t t_ms = 0;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// Append-only record of emitted events and diagnostics, one text line each.
/// Timestamps never decrease: a diagnostic stamped earlier than the last
/// entry is clamped forward.
class EventLog {
 public:
  using Entry = std::variant<InputEvent, Diagnostic>;

  void append(const InputEvent& event);
  void diagnostic(std::int64_t t_ms, std::string message);

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<InputEvent> events() const;
  std::size_t event_count() const;
  std::size_t diagnostic_count() const;
  bool empty() const { return entries_.empty(); }

  std::string to_text() const;
  void write(std::ostream& out) const;

 private:
  std::vector<Entry> entries_;
  std::int64_t last_t_ms_ = 0;
};

std::string format_entry(const EventLog::Entry& entry);

}  // namespace gazectl
