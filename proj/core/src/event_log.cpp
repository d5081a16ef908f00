#include "gazectl/event_log.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace gazectl {

void EventLog::append(const InputEvent& event) {
  InputEvent e = event;
  e.t_ms = std::max(e.t_ms, last_t_ms_);
  last_t_ms_ = e.t_ms;
  entries_.emplace_back(std::move(e));
}

void EventLog::diagnostic(std::int64_t t_ms, std::string message) {
  t_ms = std::max(t_ms, last_t_ms_);
  last_t_ms_ = t_ms;
  entries_.emplace_back(Diagnostic{t_ms, std::move(message)});
}

std::vector<InputEvent> EventLog::events() const {
  std::vector<InputEvent> out;
  for (const auto& entry : entries_) {
    if (const auto* e = std::get_if<InputEvent>(&entry)) out.push_back(*e);
  }
  return out;
}

std::size_t EventLog::event_count() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const Entry& entry) {
    return std::holds_alternative<InputEvent>(entry);
  }));
}

std::size_t EventLog::diagnostic_count() const { return entries_.size() - event_count(); }

std::string format_entry(const EventLog::Entry& entry) {
  if (const auto* e = std::get_if<InputEvent>(&entry)) return format_event(*e);
  const auto& d = std::get<Diagnostic>(entry);
  return std::to_string(d.t_ms) + " diag " + d.message;
}

std::string EventLog::to_text() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

void EventLog::write(std::ostream& out) const {
  for (const auto& entry : entries_) out << format_entry(entry) << '\n';
}

}  // namespace gazectl
