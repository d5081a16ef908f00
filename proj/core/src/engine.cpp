#include "gazectl/engine.hpp"

#include <algorithm>
#include <cmath>

namespace gazectl {

std::optional<InputEvent> HeldKeys::press(const std::string& source, const std::string& key, std::int64_t t_ms) {
  // A source holds one key at a time; switching keys means releasing first.
  if (by_source_.contains(source)) return std::nullopt;
  const bool already_down = is_down(key);
  by_source_[source] = key;
  if (already_down) return std::nullopt;
  return InputEvent::key_down(t_ms, key);
}

std::optional<InputEvent> HeldKeys::release(const std::string& source, std::int64_t t_ms) {
  const auto it = by_source_.find(source);
  if (it == by_source_.end()) return std::nullopt;
  const std::string key = it->second;
  by_source_.erase(it);
  if (is_down(key)) return std::nullopt;
  return InputEvent::key_up(t_ms, key);
}

std::vector<InputEvent> HeldKeys::release_all(std::int64_t t_ms) {
  std::vector<InputEvent> out;
  for (const auto& key : keys()) out.push_back(InputEvent::key_up(t_ms, key));
  by_source_.clear();
  return out;
}

bool HeldKeys::is_down(const std::string& key) const {
  return std::any_of(by_source_.begin(), by_source_.end(), [&](const auto& kv) { return kv.second == key; });
}

std::vector<std::string> HeldKeys::keys() const {
  std::vector<std::string> out;
  for (const auto& [source, key] : by_source_) {
    if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Engine::Engine(Profile profile, std::optional<CalibrationModel> model, EngineOptions options)
    : profile_(std::move(profile)),
      model_(std::move(model)),
      options_(options),
      mode_(profile_.modes.empty() ? std::string() : profile_.modes.front().name),
      expressions_(profile_.intentions, profile_.priority_rules, profile_.debounce_frames),
      wheel_(SelectionParams{profile_.wheel.head_deadzone, profile_.wheel.gaze_deadzone, profile_.wheel.head_span}),
      smoother_(profile_.cursor.smoothing_window),
      absolute_(profile_.cursor),
      head_keys_(profile_.cursor) {}

const Keymap& Engine::keymap() const {
  const Keymap* k = profile_.find_mode(mode_);
  return k != nullptr ? *k : empty_keymap_;
}

Pointer Engine::wheel_pointer(const std::optional<ScreenPoint>& gaze, const HeadDeflection& head) const {
  if (!gaze) return HeadPointer{head.yaw, head.pitch};
  const double side = profile_.wheel.overlay_size * options_.screen.height;
  const double left = (options_.screen.width - side) / 2.0;
  const double top = (options_.screen.height - side) / 2.0;
  const OverlayPointer p{(gaze->x - left) / side, (gaze->y - top) / side};
  // Gaze outside the overlay hands selection over to the head.
  if (p.u < 0.0 || p.u > 1.0 || p.v < 0.0 || p.v > 1.0) return HeadPointer{head.yaw, head.pitch};
  return p;
}

std::vector<InputEvent> Engine::step(const FeatureFrame& frame) {
  std::vector<InputEvent> out;
  const std::int64_t t = frame.t_ms;
  ++frames_;
  last_t_ms_ = t;

  if (!frame.face_present) {
    if (!absent_since_ms_) absent_since_ms_ = t;
    if (!face_loss_handled_ && static_cast<double>(t - *absent_since_ms_) >= profile_.cursor.face_loss_ms) {
      release_everything(t, out);
      face_loss_handled_ = true;
    }
    return out;
  }
  absent_since_ms_.reset();
  face_loss_handled_ = false;

  const HeadDeflection head = head_deflection(frame.head, profile_.head_angles_center, profile_.head_angles_scale);
  std::optional<ScreenPoint> gaze;
  if (model_) gaze = smoother_.push(predict_gaze_point(*model_, frame.gaze, frame.box, options_.screen));

  const ExpressionStep expr = expressions_.step(frame.blend, t);
  const auto commands = wheel_.on_edges(keymap(), expr.rising, expr.falling, wheel_pointer(gaze, head), t);
  for (const auto& command : commands) execute(command, t, out);

  // An open wheel owns the head: direction keys let go and the pointer and
  // scroll stay still until it closes.
  if (wheel_.is_open()) {
    apply_hold_changes(head_keys_.release_all(), t, out);
    head_keys_armed_ = false;
    return out;
  }
  // After a wheel closes the head is usually still turned toward the chosen
  // item; direction keys wait until it comes back to rest.
  if (!head_keys_armed_) {
    const double rest = profile_.cursor.release;
    head_keys_armed_ = std::abs(head.yaw) < rest && std::abs(head.pitch) < rest;
  }
  if (head_keys_armed_) apply_hold_changes(head_keys_.update(head, keymap()), t, out);

  if (auto scroll = scroll_update(frame.head.roll, profile_.cursor, keymap(), t)) out.push_back(*scroll);

  if (gaze) {
    if (cursor_mode() == CursorMode::kRelative) {
      if (auto move = relative_update(*gaze, options_.screen, profile_.cursor, t)) out.push_back(*move);
      cursor_ = gaze;
    } else {
      const bool was_locked = dwell_.locked(t);
      if (auto move = absolute_.update(*gaze, head, options_.screen, dwell_, t)) {
        out.push_back(*move);
        cursor_ = ScreenPoint{static_cast<double>(move->x), static_cast<double>(move->y)};
      }
      if (!was_locked && dwell_.locked(t)) dwell_total_ms_ = static_cast<std::int64_t>(profile_.cursor.dwell_ms);
    }
  }
  return out;
}

std::vector<InputEvent> Engine::finish(std::int64_t t_ms) {
  std::vector<InputEvent> out = held_.release_all(t_ms);
  head_keys_.release_all();
  wheel_.reset();
  return out;
}

void Engine::execute(const WheelCommand& command, std::int64_t t, std::vector<InputEvent>& out) {
  if (command.lock_mouse_ms) {
    dwell_.lock(t, *command.lock_mouse_ms);
    dwell_total_ms_ = *command.lock_mouse_ms;
  }
  switch (command.kind) {
    case WheelCommand::Kind::kPress:
      press_action(command.action, t, out);
      break;
    case WheelCommand::Kind::kHold:
      if (auto e = held_.press(command.source, command.action.key, t)) out.push_back(*e);
      break;
    case WheelCommand::Kind::kRelease:
      if (auto e = held_.release(command.source, t)) out.push_back(*e);
      break;
    case WheelCommand::Kind::kSwitchMode:
      switch_mode(command.action.mode, t, out);
      break;
  }
}

void Engine::press_action(const Action& action, std::int64_t t, std::vector<InputEvent>& out) {
  switch (action.kind) {
    case Action::Kind::kKey:
      out.push_back(InputEvent::key_press(t, action.key));
      break;
    case Action::Kind::kChord: {
      std::vector<std::string> pressed;
      for (const auto& m : action.modifiers) {
        if (held_.is_down(m)) continue;
        out.push_back(InputEvent::key_down(t, m));
        pressed.push_back(m);
      }
      out.push_back(InputEvent::key_press(t, action.key));
      for (auto it = pressed.rbegin(); it != pressed.rend(); ++it) out.push_back(InputEvent::key_up(t, *it));
      break;
    }
    case Action::Kind::kMouse:
      out.push_back(InputEvent::click(t, action.button));
      break;
    case Action::Kind::kScroll:
      out.push_back(InputEvent::scroll(t, action.scroll_direction));
      break;
    case Action::Kind::kMode:
      switch_mode(action.mode, t, out);
      break;
    case Action::Kind::kNone:
    case Action::Kind::kMeta:
      break;
  }
}

void Engine::switch_mode(const std::string& mode, std::int64_t t, std::vector<InputEvent>& out) {
  if (mode == mode_ || profile_.find_mode(mode) == nullptr) return;
  for (auto& e : held_.release_all(t)) out.push_back(std::move(e));
  head_keys_.release_all();
  wheel_.reset();
  expressions_.reset();
  mode_ = mode;
}

void Engine::release_everything(std::int64_t t, std::vector<InputEvent>& out) {
  for (auto& e : held_.release_all(t)) out.push_back(std::move(e));
  head_keys_.release_all();
  wheel_.reset();
  expressions_.reset();
  smoother_.reset();
  absolute_.reset();
  dwell_.clear();
}

void Engine::apply_hold_changes(const std::vector<HoldChange>& changes, std::int64_t t, std::vector<InputEvent>& out) {
  for (const auto& change : changes) {
    auto e = change.press ? held_.press(change.source, change.key, t) : held_.release(change.source, t);
    if (e) out.push_back(*e);
  }
}

std::vector<InputEvent> Engine::replace_profile(Profile profile, std::int64_t t_ms) {
  std::vector<InputEvent> out;
  release_everything(t_ms, out);
  profile_ = std::move(profile);
  if (profile_.find_mode(mode_) == nullptr) {
    mode_ = profile_.modes.empty() ? std::string() : profile_.modes.front().name;
  }
  expressions_ = ExpressionEngine(profile_.intentions, profile_.priority_rules, profile_.debounce_frames);
  head_keys_armed_ = true;
  wheel_ = WheelController(
      SelectionParams{profile_.wheel.head_deadzone, profile_.wheel.gaze_deadzone, profile_.wheel.head_span});
  smoother_ = GazeSmoother(profile_.cursor.smoothing_window);
  absolute_ = AbsoluteCursor(profile_.cursor);
  head_keys_ = HeadDirectionKeys(profile_.cursor);
  return out;
}

EngineSnapshot Engine::snapshot() const {
  EngineSnapshot s;
  s.t_ms = last_t_ms_.value_or(0);
  s.mode = mode_;
  s.cursor_mode = cursor_mode();
  s.cursor = cursor_;
  s.dwell_remaining_ms = dwell_.remaining_ms(s.t_ms);
  s.dwell_total_ms = s.dwell_remaining_ms > 0 ? dwell_total_ms_ : 0;
  s.active.assign(expressions_.active().begin(), expressions_.active().end());
  s.wheel = wheel_.open_wheel();
  return s;
}

}  // namespace gazectl
