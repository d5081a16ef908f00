#include "gazectl/action.hpp"

#include <algorithm>
#include <array>

namespace gazectl {
namespace {

constexpr std::array<std::string_view, 35> kNamedKeys = {
    "shift",  "ctrl",     "alt",  "caps", "tab",  "esc",   "fn",       "win",
    "space",  "enter",    "backspace", "delete", "insert", "home", "end", "pageup",
    "pagedown", "up",     "down", "left", "right", "F1",   "F2",       "F3",
    "F4",     "F5",       "F6",   "F7",   "F8",   "F9",    "F10",      "F11",
    "F12",    "printscreen", "menu",
};

bool is_single_key(std::string_view token) {
  if (token.size() != 1) return false;
  const unsigned char c = static_cast<unsigned char>(token[0]);
  return c > 0x20 && c < 0x7f;
}

bool is_key(std::string_view token) { return is_single_key(token) || is_named_key(token); }

}  // namespace

bool is_named_key(std::string_view token) {
  return std::find(kNamedKeys.begin(), kNamedKeys.end(), token) != kNamedKeys.end();
}

bool is_meta_token(std::string_view token) { return token == "keydown" || token == "keyup"; }

Expected<Action, std::string> parse_action(std::string_view token,
                                           std::span<const std::string> modes) {
  Action action;
  action.token = std::string(token);

  if (token == "null") return action;

  if (std::find(modes.begin(), modes.end(), token) != modes.end()) {
    action.kind = Action::Kind::kMode;
    action.mode = std::string(token);
    return action;
  }
  if (is_key(token)) {
    action.kind = Action::Kind::kKey;
    action.key = std::string(token);
    return action;
  }
  if (token == "mouse_left" || token == "mouse_middle" || token == "mouse_right") {
    action.kind = Action::Kind::kMouse;
    action.button = token == "mouse_left"     ? MouseButton::kLeft
                    : token == "mouse_middle" ? MouseButton::kMiddle
                                              : MouseButton::kRight;
    return action;
  }
  if (token == "scroll_up" || token == "scroll_down") {
    action.kind = Action::Kind::kScroll;
    action.scroll_direction = token == "scroll_up" ? 1 : -1;
    return action;
  }
  if (is_meta_token(token)) {
    action.kind = Action::Kind::kMeta;
    return action;
  }
  if (token.size() > 2 && token.find('+') != std::string_view::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= token.size()) {
      const auto plus = token.find('+', start);
      const auto end = plus == std::string_view::npos ? token.size() : plus;
      parts.emplace_back(token.substr(start, end - start));
      if (plus == std::string_view::npos) break;
      start = plus + 1;
    }
    const bool valid = parts.size() >= 2 && std::all_of(parts.begin(), parts.end(),
                                                        [](const std::string& p) { return is_key(p); });
    if (valid) {
      action.kind = Action::Kind::kChord;
      action.key = parts.back();
      parts.pop_back();
      action.modifiers = std::move(parts);
      return action;
    }
  }
  return unexpected("unrecognized action token '" + std::string(token) + "'");
}

}  // namespace gazectl
