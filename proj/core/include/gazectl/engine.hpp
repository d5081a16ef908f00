#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gazectl/calibration.hpp"
#include "gazectl/cursor.hpp"
#include "gazectl/events.hpp"
#include "gazectl/expression.hpp"
#include "gazectl/profile.hpp"
#include "gazectl/snapshot.hpp"
#include "gazectl/types.hpp"
#include "gazectl/wheel.hpp"

namespace gazectl {

struct EngineOptions {
  ScreenSize screen;
};

/// Tracks which keys are physically down and who holds them, so a key
/// shared by two sources goes up only when the last one lets go.
class HeldKeys {
 public:
  std::optional<InputEvent> press(const std::string& source, const std::string& key,
                                  std::int64_t t_ms);
  std::optional<InputEvent> release(const std::string& source, std::int64_t t_ms);
  std::vector<InputEvent> release_all(std::int64_t t_ms);

  bool is_down(const std::string& key) const;
  std::vector<std::string> keys() const;
  bool empty() const { return by_source_.empty(); }

 private:
  std::map<std::string, std::string> by_source_;
};

/// The per-frame pipeline. Advancing it is a pure function of
/// (state, frame, profile, model); time comes only from frame timestamps.
///
/// Stage order: expressions (raw, priority, debounce) -> wheel edges and
/// single-item holds -> head direction keys -> scroll -> cursor mode ->
/// cursor motion.
class Engine {
 public:
  Engine(Profile profile, std::optional<CalibrationModel> model = std::nullopt,
         EngineOptions options = {});

  std::vector<InputEvent> step(const FeatureFrame& frame);

  /// End of stream: releases held keys and closes any wheel.
  std::vector<InputEvent> finish(std::int64_t t_ms);

  EngineSnapshot snapshot() const;

  /// Swaps in a new profile between frames. Held keys are released and every
  /// state machine returns to idle; the mode is kept when it still exists.
  std::vector<InputEvent> replace_profile(Profile profile, std::int64_t t_ms);

  const Profile& profile() const { return profile_; }
  const std::string& mode() const { return mode_; }
  CursorMode cursor_mode() const { return cursor_mode_for(mode_, profile_.cursor); }
  bool wheel_open() const { return wheel_.is_open(); }
  std::vector<std::string> held_keys() const { return held_.keys(); }
  std::int64_t frame_count() const { return frames_; }
  std::optional<std::int64_t> last_t_ms() const { return last_t_ms_; }

 private:
  const Keymap& keymap() const;
  Pointer wheel_pointer(const std::optional<ScreenPoint>& gaze, const HeadDeflection& head) const;
  void execute(const WheelCommand& command, std::int64_t t, std::vector<InputEvent>& out);
  void press_action(const Action& action, std::int64_t t, std::vector<InputEvent>& out);
  void switch_mode(const std::string& mode, std::int64_t t, std::vector<InputEvent>& out);
  void release_everything(std::int64_t t, std::vector<InputEvent>& out);
  void apply_hold_changes(const std::vector<HoldChange>& changes, std::int64_t t,
                          std::vector<InputEvent>& out);

  Profile profile_;
  std::optional<CalibrationModel> model_;
  EngineOptions options_;
  Keymap empty_keymap_;

  std::string mode_;
  ExpressionEngine expressions_;
  WheelController wheel_;
  GazeSmoother smoother_;
  AbsoluteCursor absolute_;
  HeadDirectionKeys head_keys_;
  bool head_keys_armed_ = true;
  DwellLock dwell_;
  std::int64_t dwell_total_ms_ = 0;
  HeldKeys held_;

  std::optional<std::int64_t> absent_since_ms_;
  bool face_loss_handled_ = false;
  std::optional<ScreenPoint> cursor_;
  std::int64_t frames_ = 0;
  std::optional<std::int64_t> last_t_ms_;
};

}  // namespace gazectl
