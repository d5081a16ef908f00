#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazectl/cursor.hpp"
#include "gazectl/expected.hpp"
#include "gazectl/expression.hpp"
#include "gazectl/wheel.hpp"

namespace gazectl {

inline constexpr std::string_view kHeadPseudoIntentions[] = {
    "head_up", "head_down", "head_left", "head_right", "head_roll_left", "head_roll_right"};

bool is_head_pseudo_intention(std::string_view name);

struct WheelSettings {
  double overlay_size = 0.5;  // overlay side as a fraction of screen height
  double gaze_deadzone = 0.15;
  double head_deadzone = 1.0;
  double head_span = 2.0;

  bool operator==(const WheelSettings&) const = default;
};

/// A validated user profile: keymaps with their wheels, expression specs,
/// priority rules, head-angle normalization and cursor parameters.
struct Profile {
  HeadAngles head_angles_center{0.0, 3.0, 0.0};
  HeadAngles head_angles_scale{8.0, 8.0, 8.0};
  std::vector<Keymap> modes;  // declaration order; the first is the start mode
  std::vector<IntentionSpec> intentions;
  std::vector<PriorityRule> priority_rules;
  int debounce_frames = 2;
  CursorConfig cursor;
  WheelSettings wheel;

  const Keymap* find_mode(const std::string& name) const;
  std::vector<std::string> mode_names() const;

  bool operator==(const Profile&) const = default;
};

struct ConfigError {
  int line = 0;  // 1-based, 0 when unknown
  std::string message;

  std::string describe() const;
};

struct LoadedProfile {
  Profile profile;
  std::vector<std::string> warnings;
};

Expected<LoadedProfile, ConfigError> parse_profile(std::string_view text);
Expected<LoadedProfile, ConfigError> load_profile(const std::string& path);

/// Emits a profile document that parse_profile reads back to an equal Profile.
std::string serialize_profile(const Profile& profile);

struct CoverageReport {
  std::vector<std::string> reachable;
  std::vector<std::string> unreachable;

  bool complete() const { return unreachable.empty(); }
};

/// Which required keys can be produced by some (mode, intention, item) path.
/// Only modes reachable from the start mode through mode wheels count.
CoverageReport validate_coverage(const Profile& profile, std::span<const std::string> required);

}  // namespace gazectl
