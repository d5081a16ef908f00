#include "gazectl/sinks.hpp"

#include <linux/input-event-codes.h>

#include <array>
#include <utility>

namespace gazectl {

void DryRunBackend::write(std::span<const OsInputRecord> records) {
  records_.insert(records_.end(), records.begin(), records.end());
}

namespace {

constexpr std::array<std::pair<std::string_view, std::uint16_t>, 35> kNamedCodes{{
    {"shift", KEY_LEFTSHIFT}, {"ctrl", KEY_LEFTCTRL},   {"alt", KEY_LEFTALT},   {"caps", KEY_CAPSLOCK},
    {"tab", KEY_TAB},         {"esc", KEY_ESC},         {"fn", KEY_FN},         {"win", KEY_LEFTMETA},
    {"space", KEY_SPACE},     {"enter", KEY_ENTER},     {"backspace", KEY_BACKSPACE},
    {"delete", KEY_DELETE},   {"insert", KEY_INSERT},   {"home", KEY_HOME},     {"end", KEY_END},
    {"pageup", KEY_PAGEUP},   {"pagedown", KEY_PAGEDOWN}, {"up", KEY_UP},       {"down", KEY_DOWN},
    {"left", KEY_LEFT},       {"right", KEY_RIGHT},     {"F1", KEY_F1},         {"F2", KEY_F2},
    {"F3", KEY_F3},           {"F4", KEY_F4},           {"F5", KEY_F5},         {"F6", KEY_F6},
    {"F7", KEY_F7},           {"F8", KEY_F8},           {"F9", KEY_F9},         {"F10", KEY_F10},
    {"F11", KEY_F11},         {"F12", KEY_F12},         {"printscreen", KEY_SYSRQ}, {"menu", KEY_COMPOSE},
}};

constexpr std::array<std::uint16_t, 26> kLetterCodes{
    KEY_A, KEY_B, KEY_C, KEY_D, KEY_E, KEY_F, KEY_G, KEY_H, KEY_I, KEY_J, KEY_K, KEY_L, KEY_M,
    KEY_N, KEY_O, KEY_P, KEY_Q, KEY_R, KEY_S, KEY_T, KEY_U, KEY_V, KEY_W, KEY_X, KEY_Y, KEY_Z};

constexpr std::array<std::uint16_t, 10> kDigitCodes{KEY_0, KEY_1, KEY_2, KEY_3, KEY_4,
                                                    KEY_5, KEY_6, KEY_7, KEY_8, KEY_9};

constexpr std::array<std::pair<char, std::uint16_t>, 11> kPunctuationCodes{{
    {'`', KEY_GRAVE}, {'-', KEY_MINUS}, {'=', KEY_EQUAL}, {'[', KEY_LEFTBRACE}, {']', KEY_RIGHTBRACE},
    {'\\', KEY_BACKSLASH}, {';', KEY_SEMICOLON}, {'\'', KEY_APOSTROPHE}, {',', KEY_COMMA}, {'.', KEY_DOT},
    {'/', KEY_SLASH},
}};

constexpr OsInputRecord kSync{EV_SYN, SYN_REPORT, 0};

std::uint16_t button_code(MouseButton button) {
  switch (button) {
    case MouseButton::kLeft: return BTN_LEFT;
    case MouseButton::kMiddle: return BTN_MIDDLE;
    case MouseButton::kRight: return BTN_RIGHT;
  }
  return BTN_LEFT;
}

}  // namespace

std::optional<std::uint16_t> linux_key_code(std::string_view key) {
  for (const auto& [name, code] : kNamedCodes) {
    if (name == key) return code;
  }
  if (key.size() != 1) return std::nullopt;
  const char c = key.front();
  if (c >= 'a' && c <= 'z') return kLetterCodes[static_cast<std::size_t>(c - 'a')];
  if (c >= 'A' && c <= 'Z') return kLetterCodes[static_cast<std::size_t>(c - 'A')];
  if (c >= '0' && c <= '9') return kDigitCodes[static_cast<std::size_t>(c - '0')];
  for (const auto& [ch, code] : kPunctuationCodes) {
    if (ch == c) return code;
  }
  return std::nullopt;
}

OsSink::OsSink(std::unique_ptr<OsInputBackend> backend) : backend_(std::move(backend)) {}

std::vector<OsInputRecord> OsSink::translate(const InputEvent& event) {
  std::vector<OsInputRecord> out;
  auto tap = [&](std::uint16_t code) {
    out.push_back({EV_KEY, code, 1});
    out.push_back(kSync);
    out.push_back({EV_KEY, code, 0});
    out.push_back(kSync);
  };
  switch (event.kind) {
    case EventKind::kKeyDown:
    case EventKind::kKeyUp:
    case EventKind::kKeyPress: {
      const auto code = linux_key_code(event.key);
      if (!code) return {};
      if (event.kind == EventKind::kKeyPress) {
        tap(*code);
      } else {
        out.push_back({EV_KEY, *code, event.kind == EventKind::kKeyDown ? 1 : 0});
        out.push_back(kSync);
      }
      break;
    }
    case EventKind::kMouseMoveAbs:
      out.push_back({EV_ABS, ABS_X, event.x});
      out.push_back({EV_ABS, ABS_Y, event.y});
      out.push_back(kSync);
      break;
    case EventKind::kMouseMoveRel:
      if (event.x != 0) out.push_back({EV_REL, REL_X, event.x});
      if (event.y != 0) out.push_back({EV_REL, REL_Y, event.y});
      if (!out.empty()) out.push_back(kSync);
      break;
    case EventKind::kMouseClick:
      tap(button_code(event.button));
      break;
    case EventKind::kScroll:
      if (event.amount == 0) break;
      out.push_back({EV_REL, REL_WHEEL, event.amount});
      out.push_back(kSync);
      break;
  }
  return out;
}

void OsSink::send(const InputEvent& event) {
  const auto records = translate(event);
  if (records.empty()) {
    ++untranslated_;
    return;
  }
  backend_->write(records);
}

}  // namespace gazectl
