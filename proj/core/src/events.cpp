#include "gazectl/events.hpp"

#include <charconv>
#include <string>

namespace gazectl {

std::string_view to_string(MouseButton button) {
  switch (button) {
    case MouseButton::kLeft: return "left";
    case MouseButton::kMiddle: return "middle";
    case MouseButton::kRight: return "right";
  }
  return "left";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kKeyDown: return "key_down";
    case EventKind::kKeyUp: return "key_up";
    case EventKind::kKeyPress: return "key_press";
    case EventKind::kMouseMoveAbs: return "mouse_move_abs";
    case EventKind::kMouseMoveRel: return "mouse_move_rel";
    case EventKind::kMouseClick: return "mouse_click";
    case EventKind::kScroll: return "scroll";
  }
  return "unknown";
}

InputEvent InputEvent::key_down(std::int64_t t, std::string key) {
  InputEvent e;
  e.t_ms = t;
  e.kind = EventKind::kKeyDown;
  e.key = std::move(key);
  return e;
}

InputEvent InputEvent::key_up(std::int64_t t, std::string key) {
  InputEvent e = key_down(t, std::move(key));
  e.kind = EventKind::kKeyUp;
  return e;
}

InputEvent InputEvent::key_press(std::int64_t t, std::string key) {
  InputEvent e = key_down(t, std::move(key));
  e.kind = EventKind::kKeyPress;
  return e;
}

InputEvent InputEvent::move_abs(std::int64_t t, int x, int y) {
  InputEvent e;
  e.t_ms = t;
  e.kind = EventKind::kMouseMoveAbs;
  e.x = x;
  e.y = y;
  return e;
}

InputEvent InputEvent::move_rel(std::int64_t t, int dx, int dy) {
  InputEvent e = move_abs(t, dx, dy);
  e.kind = EventKind::kMouseMoveRel;
  return e;
}

InputEvent InputEvent::click(std::int64_t t, MouseButton button) {
  InputEvent e;
  e.t_ms = t;
  e.kind = EventKind::kMouseClick;
  e.button = button;
  return e;
}

InputEvent InputEvent::scroll(std::int64_t t, int amount) {
  InputEvent e;
  e.t_ms = t;
  e.kind = EventKind::kScroll;
  e.amount = amount;
  return e;
}

std::string payload_text(const InputEvent& event) {
  switch (event.kind) {
    case EventKind::kKeyDown:
    case EventKind::kKeyUp:
    case EventKind::kKeyPress:
      return event.key;
    case EventKind::kMouseMoveAbs:
    case EventKind::kMouseMoveRel:
      return std::to_string(event.x) + "," + std::to_string(event.y);
    case EventKind::kMouseClick:
      return std::string(to_string(event.button));
    case EventKind::kScroll:
      return std::to_string(event.amount);
  }
  return {};
}

std::string format_event(const InputEvent& event) {
  std::string line = std::to_string(event.t_ms);
  line += ' ';
  line += to_string(event.kind);
  line += ' ';
  line += payload_text(event);
  return line;
}

namespace {

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::optional<InputEvent> parse_event(std::string_view line) {
  const auto first = line.find(' ');
  if (first == std::string_view::npos) return std::nullopt;
  const auto second = line.find(' ', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  const auto t_text = line.substr(0, first);
  const auto kind = line.substr(first + 1, second - first - 1);
  const auto payload = line.substr(second + 1);

  std::int64_t t = 0;
  if (!parse_number(t_text, t)) return std::nullopt;

  if (kind == "key_down") return InputEvent::key_down(t, std::string(payload));
  if (kind == "key_up") return InputEvent::key_up(t, std::string(payload));
  if (kind == "key_press") return InputEvent::key_press(t, std::string(payload));
  if (kind == "mouse_move_abs" || kind == "mouse_move_rel") {
    const auto comma = payload.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    int x = 0;
    int y = 0;
    if (!parse_number(payload.substr(0, comma), x) || !parse_number(payload.substr(comma + 1), y)) {
      return std::nullopt;
    }
    return kind == "mouse_move_abs" ? InputEvent::move_abs(t, x, y) : InputEvent::move_rel(t, x, y);
  }
  if (kind == "mouse_click") {
    if (payload == "left") return InputEvent::click(t, MouseButton::kLeft);
    if (payload == "middle") return InputEvent::click(t, MouseButton::kMiddle);
    if (payload == "right") return InputEvent::click(t, MouseButton::kRight);
    return std::nullopt;
  }
  if (kind == "scroll") {
    int amount = 0;
    if (!parse_number(payload, amount)) return std::nullopt;
    return InputEvent::scroll(t, amount);
  }
  return std::nullopt;
}

}  // namespace gazectl
