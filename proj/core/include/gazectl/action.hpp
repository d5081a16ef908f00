#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazectl/events.hpp"
#include "gazectl/expected.hpp"

namespace gazectl {

/// What a wheel item does when triggered.
struct Action {
  enum class Kind {
    kNone,    // null item
    kKey,     // single or named key
    kChord,   // modifiers + key, e.g. ctrl+c
    kMouse,   // mouse_left / mouse_middle / mouse_right
    kScroll,  // scroll_up / scroll_down
    kMode,    // switch keymap
    kMeta,    // recognized but unbound token (keydown / keyup)
  };

  Kind kind = Kind::kNone;
  std::string token;                   // source text, "null" for kNone
  std::string key;                     // kKey, kChord (final key)
  std::vector<std::string> modifiers;  // kChord
  MouseButton button = MouseButton::kLeft;
  int scroll_direction = 0;  // +1 up, -1 down
  std::string mode;          // kMode

  static Action none() { return Action{}; }

  bool operator==(const Action&) const = default;
};

bool is_named_key(std::string_view token);
bool is_meta_token(std::string_view token);

/// Parses one wheel item. Names listed in `modes` resolve to mode switches.
/// Returns an error message for tokens outside the recognized set.
Expected<Action, std::string> parse_action(std::string_view token,
                                           std::span<const std::string> modes);

}  // namespace gazectl
