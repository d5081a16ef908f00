#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gazectl/action.hpp"
#include "gazectl/expression.hpp"

namespace gazectl {

enum class LayoutType { kRadial, kSquare };

struct WheelSpec {
  std::string owner;
  std::vector<Action> items;
  LayoutType layout = LayoutType::kRadial;
  std::optional<double> lock_mouse_move_s;  // induce: lock_mouse_move: duration

  bool single_item() const { return items.size() == 1; }

  bool operator==(const WheelSpec&) const = default;
};

/// Intention -> wheel bindings for one mode (e.g. "game").
struct Keymap {
  std::string name;
  std::vector<WheelSpec> bindings;

  const WheelSpec* find(const std::string& intention) const;

  bool operator==(const Keymap&) const = default;
};

/// Angular sector in degrees, measured clockwise from 12 o'clock.
struct Sector {
  double center_deg = 0.0;
  double width_deg = 360.0;
};

/// Grid cell in normalized overlay coordinates (v grows downward).
struct Cell {
  double u0 = 0.0;
  double v0 = 0.0;
  double u1 = 1.0;
  double v1 = 1.0;
};

struct WheelGeometry {
  LayoutType layout = LayoutType::kRadial;
  std::size_t count = 0;
  int columns = 0;
  int rows = 0;
  std::vector<Sector> sectors;
  std::vector<Cell> cells;
};

/// Radial: n equal sectors, item 0 centered at 12 o'clock, clockwise.
/// Square: ceil(sqrt(n)) columns, row-major, last row possibly short.
WheelGeometry layout_wheel(std::size_t count, LayoutType type);
WheelGeometry layout_wheel(const WheelSpec& spec);

/// Head deflection direction: dx > 0 is right, dy > 0 is up.
struct HeadPointer {
  double dx = 0.0;
  double dy = 0.0;
};

/// Gaze inside the wheel overlay, (0,0) top-left to (1,1) bottom-right.
struct OverlayPointer {
  double u = 0.5;
  double v = 0.5;
};

using Pointer = std::variant<std::monostate, HeadPointer, OverlayPointer>;

struct SelectionParams {
  double head_deadzone = 1.0;  // normalized head units
  double gaze_deadzone = 0.15; // fraction of wheel radius
  double head_span = 2.0;      // head deflection mapped onto a square grid edge
};

/// Clockwise angle from 12 o'clock in [0, 360).
double pointer_angle_deg(double dx, double dy);

/// Index of the highlighted item, or nothing inside the deadzone / outside
/// the grid.
std::optional<std::size_t> select_segment(const WheelGeometry& geometry, const Pointer& pointer,
                                          const SelectionParams& params = {});

struct WheelCommand {
  enum class Kind {
    kPress,       // one-shot action (tap, click, chord, scroll)
    kHold,        // key down until the matching kRelease
    kRelease,
    kSwitchMode,
  };

  Kind kind = Kind::kPress;
  Action action;
  std::string source;  // owning intention
  std::optional<std::int64_t> lock_mouse_ms;
};

struct OpenWheel {
  std::string owner;
  WheelSpec spec;
  WheelGeometry geometry;
  std::optional<std::size_t> highlighted;
  std::int64_t opened_at_ms = 0;
};

/// Selection-wheel state machine. A rising edge of an owner intention opens
/// its wheel, the pointer highlights an item, and the owner's falling edge
/// confirms whatever was highlighted on the previous frame. Single-item
/// wheels skip the UI and act as holds.
class WheelController {
 public:
  explicit WheelController(SelectionParams params = {}) : params_(params) {}

  std::vector<WheelCommand> on_edges(const Keymap& keymap, const IntentionSet& rising,
                                     const IntentionSet& falling, const Pointer& pointer,
                                     std::int64_t t_ms);

  /// Closes the open wheel without emitting anything and forgets holds.
  void reset();

  bool is_open() const { return open_.has_value(); }
  const std::optional<OpenWheel>& open_wheel() const { return open_; }
  const SelectionParams& params() const { return params_; }

 private:
  SelectionParams params_;
  std::optional<OpenWheel> open_;
  std::vector<std::string> holding_;
};

}  // namespace gazectl
