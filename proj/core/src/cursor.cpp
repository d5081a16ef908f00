#include "gazectl/cursor.hpp"

#include <algorithm>
#include <cmath>

namespace gazectl {

std::string_view to_string(CursorMode mode) {
  return mode == CursorMode::kRelative ? "relative" : "absolute";
}

CursorMode cursor_mode_for(const std::string& keymap_mode, const CursorConfig& config) {
  const auto& rel = config.relative_modes;
  return std::find(rel.begin(), rel.end(), keymap_mode) != rel.end() ? CursorMode::kRelative
                                                                     : CursorMode::kAbsolute;
}

HeadDeflection head_deflection(const HeadPose& pose, const HeadAngles& center, const HeadAngles& scale) {
  return {(pose.yaw - center.yaw) / scale.yaw, (pose.pitch - center.pitch) / scale.pitch,
          (pose.roll - center.roll) / scale.roll};
}

ScreenPoint GazeSmoother::push(ScreenPoint raw) {
  points_.push_back(raw);
  while (points_.size() > window_) points_.pop_front();
  return *current();
}

std::optional<ScreenPoint> GazeSmoother::current() const {
  if (points_.empty()) return std::nullopt;
  ScreenPoint sum;
  for (const auto& p : points_) {
    sum.x += p.x;
    sum.y += p.y;
  }
  const double n = static_cast<double>(points_.size());
  return ScreenPoint{sum.x / n, sum.y / n};
}

void DwellLock::lock(std::int64_t t_ms, std::int64_t duration_ms) {
  const std::int64_t until = t_ms + duration_ms;
  if (!until_ || *until_ < until) until_ = until;
}

std::int64_t DwellLock::remaining_ms(std::int64_t t_ms) const {
  return locked(t_ms) ? *until_ - t_ms : 0;
}

int Hysteresis::update(double value) {
  switch (state_) {
    case 0:
      if (value >= engage_) state_ = 1;
      else if (value <= -engage_) state_ = -1;
      break;
    case 1:
      if (value < release_) state_ = value <= -engage_ ? -1 : 0;
      break;
    default:
      if (value > -release_) state_ = value >= engage_ ? 1 : 0;
      break;
  }
  return state_;
}

AbsoluteCursor::AbsoluteCursor(const CursorConfig& config)
    : config_(config), yaw_(config.deadzone, config.release), pitch_(config.deadzone, config.release) {}

ScreenPoint AbsoluteCursor::target(ScreenPoint smoothed_gaze, const HeadDeflection& head, ScreenSize screen) {
  const int yaw_dir = yaw_.update(head.yaw);
  const int pitch_dir = pitch_.update(head.pitch);
  ScreenPoint p = smoothed_gaze;
  if (yaw_dir != 0) p.x += config_.fine_gain * head.yaw;
  // Head up moves the pointer up the screen.
  if (pitch_dir != 0) p.y -= config_.fine_gain * head.pitch;
  return clamp_to_screen(p, screen);
}

std::optional<InputEvent> AbsoluteCursor::update(ScreenPoint smoothed_gaze, const HeadDeflection& head,
                                                 ScreenSize screen, DwellLock& dwell, std::int64_t t_ms) {
  const ScreenPoint p = target(smoothed_gaze, head, screen);
  const auto dwell_ms = static_cast<std::int64_t>(config_.dwell_ms);

  if (dwell.locked(t_ms)) {
    anchor_ = p;
    anchor_t_ms_ = t_ms;
    return std::nullopt;
  }

  if (!anchor_ || std::hypot(p.x - anchor_->x, p.y - anchor_->y) >= config_.stillness_eps) {
    anchor_ = p;
    anchor_t_ms_ = t_ms;
  } else if (t_ms - anchor_t_ms_ >= dwell_ms) {
    dwell.lock(t_ms, dwell_ms);
    anchor_t_ms_ = t_ms;
    return std::nullopt;
  }

  const std::pair<int, int> rounded{static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
  if (last_emitted_ == rounded) return std::nullopt;
  last_emitted_ = rounded;
  return InputEvent::move_abs(t_ms, rounded.first, rounded.second);
}

void AbsoluteCursor::reset() {
  yaw_.reset();
  pitch_.reset();
  anchor_.reset();
  anchor_t_ms_ = 0;
}

namespace {

double penetration(double coord, double extent, double fraction) {
  const double band = fraction * extent;
  if (band <= 0.0) return 0.0;
  if (coord < band) return -std::min(1.0, (band - coord) / band);
  const double far_edge = extent - band;
  if (coord > far_edge) return std::min(1.0, (coord - far_edge) / band);
  return 0.0;
}

}  // namespace

std::optional<InputEvent> relative_update(ScreenPoint gaze, ScreenSize screen, const CursorConfig& config,
                                          std::int64_t t_ms) {
  const double px = penetration(gaze.x, screen.width, config.edge_band);
  const double py = penetration(gaze.y, screen.height, config.edge_band);
  const int dx = static_cast<int>(std::lround(config.relative_gain * px));
  const int dy = static_cast<int>(std::lround(config.relative_gain * py));
  if (dx == 0 && dy == 0) return std::nullopt;
  return InputEvent::move_rel(t_ms, dx, dy);
}

int scroll_notches(double roll_deg, const CursorConfig& config) {
  const double excess = std::abs(roll_deg) - config.scroll_threshold_deg;
  if (!(excess > 0.0)) return 0;
  const int amount = static_cast<int>(std::lround(config.scroll_gain * excess));
  return roll_deg < 0.0 ? amount : -amount;
}

std::optional<InputEvent> scroll_update(double roll_deg, const CursorConfig& config, const Keymap& keymap,
                                        std::int64_t t_ms) {
  const int notches = scroll_notches(roll_deg, config);
  if (notches == 0) return std::nullopt;
  const WheelSpec* spec = keymap.find(roll_deg < 0.0 ? "head_roll_left" : "head_roll_right");
  if (spec == nullptr || spec->items.empty()) return std::nullopt;
  const Action& item = spec->items.front();
  if (item.kind != Action::Kind::kScroll) return std::nullopt;
  return InputEvent::scroll(t_ms, std::abs(notches) * item.scroll_direction);
}

HeadDirectionKeys::HeadDirectionKeys(const CursorConfig& config)
    : yaw_{Hysteresis(config.deadzone, config.release), "head_right", "head_left", 0, {}},
      pitch_{Hysteresis(config.deadzone, config.release), "head_up", "head_down", 0, {}} {}

std::vector<HoldChange> HeadDirectionKeys::update_axis(Axis& axis, double value, const Keymap& keymap) {
  const int dir = axis.band.update(value);
  std::string key;
  if (dir != 0) {
    const WheelSpec* spec = keymap.find(dir > 0 ? axis.positive : axis.negative);
    if (spec != nullptr && spec->single_item() && spec->items.front().kind == Action::Kind::kKey) {
      key = spec->items.front().key;
    }
  }
  std::vector<HoldChange> changes;
  if (axis.held == dir && axis.held_key == key) return changes;
  if (axis.held != 0 && !axis.held_key.empty()) {
    changes.push_back({axis.held > 0 ? axis.positive : axis.negative, axis.held_key, false});
  }
  axis.held = dir;
  axis.held_key = key;
  if (dir != 0 && !key.empty()) changes.push_back({dir > 0 ? axis.positive : axis.negative, key, true});
  return changes;
}

std::vector<HoldChange> HeadDirectionKeys::update(const HeadDeflection& head, const Keymap& keymap) {
  auto changes = update_axis(yaw_, head.yaw, keymap);
  auto pitch = update_axis(pitch_, head.pitch, keymap);
  changes.insert(changes.end(), pitch.begin(), pitch.end());
  return changes;
}

std::vector<HoldChange> HeadDirectionKeys::release_all() {
  std::vector<HoldChange> changes;
  for (Axis* axis : {&yaw_, &pitch_}) {
    if (axis->held != 0 && !axis->held_key.empty()) {
      changes.push_back({axis->held > 0 ? axis->positive : axis->negative, axis->held_key, false});
    }
    axis->held = 0;
    axis->held_key.clear();
    axis->band.reset();
  }
  return changes;
}

}  // namespace gazectl
