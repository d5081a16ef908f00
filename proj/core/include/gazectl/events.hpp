#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gazectl {

enum class MouseButton { kLeft, kMiddle, kRight };

std::string_view to_string(MouseButton button);

enum class EventKind {
  kKeyDown,
  kKeyUp,
  kKeyPress,
  kMouseMoveAbs,
  kMouseMoveRel,
  kMouseClick,
  kScroll,
};

std::string_view to_string(EventKind kind);

/// A synthesized input event. Which payload fields are meaningful depends on
/// `kind`: key events use `key`, moves use `x`/`y`, clicks use `button`,
/// scroll uses `amount` (positive scrolls up).
struct InputEvent {
  std::int64_t t_ms = 0;
  EventKind kind = EventKind::kKeyPress;
  std::string key;
  int x = 0;
  int y = 0;
  MouseButton button = MouseButton::kLeft;
  int amount = 0;

  static InputEvent key_down(std::int64_t t, std::string key);
  static InputEvent key_up(std::int64_t t, std::string key);
  static InputEvent key_press(std::int64_t t, std::string key);
  static InputEvent move_abs(std::int64_t t, int x, int y);
  static InputEvent move_rel(std::int64_t t, int dx, int dy);
  static InputEvent click(std::int64_t t, MouseButton button);
  static InputEvent scroll(std::int64_t t, int amount);

  bool operator==(const InputEvent&) const = default;
};

/// Payload text used in the event log ("space", "960,540", "left", "-3").
std::string payload_text(const InputEvent& event);

/// One event-log line: "<t_ms> <kind> <payload>".
std::string format_event(const InputEvent& event);

std::optional<InputEvent> parse_event(std::string_view line);

}  // namespace gazectl
