#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "gazectl/events.hpp"
#include "gazectl/types.hpp"
#include "gazectl/wheel.hpp"

namespace gazectl {

struct CursorConfig {
  int smoothing_window = 5;
  double edge_band = 0.10;       // fraction of each screen dimension
  double relative_gain = 8.0;    // px per frame at full penetration
  double fine_gain = 10.0;       // px per normalized head unit
  double deadzone = 1.0;         // head deflection engage threshold
  double release = 0.8;          // head deflection release threshold
  double dwell_ms = 1000.0;
  double stillness_eps = 3.0;    // px
  double scroll_threshold_deg = 10.0;
  double scroll_gain = 0.2;      // notches per degree beyond threshold, per frame
  double face_loss_ms = 500.0;
  std::vector<std::string> relative_modes{"game"};

  bool operator==(const CursorConfig&) const = default;
};

enum class CursorMode { kAbsolute, kRelative };

std::string_view to_string(CursorMode mode);

/// Keymap-bound cursor mode: modes listed in relative_modes steer by edge
/// gaze, every other mode maps gaze straight to the pointer.
CursorMode cursor_mode_for(const std::string& keymap_mode, const CursorConfig& config);

struct HeadAngles {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;

  bool operator==(const HeadAngles&) const = default;
};

/// (angle - center) / scale, dimensionless.
struct HeadDeflection {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

HeadDeflection head_deflection(const HeadPose& pose, const HeadAngles& center,
                               const HeadAngles& scale);

/// Moving average over the last `window` gaze points.
class GazeSmoother {
 public:
  explicit GazeSmoother(int window = 5) : window_(window < 1 ? 1 : window) {}

  ScreenPoint push(ScreenPoint raw);
  void reset() { points_.clear(); }
  std::optional<ScreenPoint> current() const;

 private:
  std::size_t window_;
  std::deque<ScreenPoint> points_;
};

/// While locked, cursor-move output is suppressed. Clicks are unaffected.
class DwellLock {
 public:
  void lock(std::int64_t t_ms, std::int64_t duration_ms);
  bool locked(std::int64_t t_ms) const { return until_ && t_ms < *until_; }
  std::int64_t remaining_ms(std::int64_t t_ms) const;
  std::optional<std::int64_t> until() const { return until_; }
  void clear() { until_.reset(); }

 private:
  std::optional<std::int64_t> until_;
};

/// Per-axis deadzone with a lower release threshold.
class Hysteresis {
 public:
  Hysteresis(double engage, double release) : engage_(engage), release_(release) {}

  /// Returns -1, 0 or +1: the engaged direction after observing `value`.
  int update(double value);
  int state() const { return state_; }
  void reset() { state_ = 0; }

 private:
  double engage_;
  double release_;
  int state_ = 0;
};

/// Absolute mode: smoothed gaze point plus a head fine-tune offset, with a
/// dwell lock once the target has stayed within stillness_eps for dwell_ms.
class AbsoluteCursor {
 public:
  explicit AbsoluteCursor(const CursorConfig& config);

  ScreenPoint target(ScreenPoint smoothed_gaze, const HeadDeflection& head, ScreenSize screen);

  std::optional<InputEvent> update(ScreenPoint smoothed_gaze, const HeadDeflection& head,
                                   ScreenSize screen, DwellLock& dwell, std::int64_t t_ms);

  void reset();
  std::optional<std::pair<int, int>> last_emitted() const { return last_emitted_; }

 private:
  CursorConfig config_;
  Hysteresis yaw_;
  Hysteresis pitch_;
  std::optional<ScreenPoint> anchor_;
  std::int64_t anchor_t_ms_ = 0;
  std::optional<std::pair<int, int>> last_emitted_;
};

/// Relative mode: gaze inside the outer band of a side pushes the view that
/// way, scaled by penetration depth (0 at the band's inner edge, 1 at the
/// screen edge). Axes are independent.
std::optional<InputEvent> relative_update(ScreenPoint gaze, ScreenSize screen,
                                          const CursorConfig& config, std::int64_t t_ms);

/// Scroll while |roll| exceeds the threshold, using the head_roll_left /
/// head_roll_right bindings for direction. Roll left is negative.
std::optional<InputEvent> scroll_update(double roll_deg, const CursorConfig& config,
                                        const Keymap& keymap, std::int64_t t_ms);

/// Signed scroll notches for a roll angle: positive for roll left.
int scroll_notches(double roll_deg, const CursorConfig& config);

struct HoldChange {
  std::string source;  // head_up, head_down, head_left, head_right
  std::string key;
  bool press = true;
};

/// Held direction keys from head deflection, with hysteresis per axis and
/// mutually exclusive directions on the same axis.
class HeadDirectionKeys {
 public:
  explicit HeadDirectionKeys(const CursorConfig& config);

  std::vector<HoldChange> update(const HeadDeflection& head, const Keymap& keymap);
  std::vector<HoldChange> release_all();

 private:
  struct Axis {
    Hysteresis band;
    std::string positive;  // pseudo-intention for +deflection
    std::string negative;
    int held = 0;
    std::string held_key;
  };

  std::vector<HoldChange> update_axis(Axis& axis, double value, const Keymap& keymap);

  Axis yaw_;
  Axis pitch_;
};

}  // namespace gazectl
