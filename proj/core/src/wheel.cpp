#include "gazectl/wheel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gazectl {

const WheelSpec* Keymap::find(const std::string& intention) const {
  const auto it = std::find_if(bindings.begin(), bindings.end(),
                               [&](const WheelSpec& spec) { return spec.owner == intention; });
  return it == bindings.end() ? nullptr : &*it;
}

WheelGeometry layout_wheel(std::size_t count, LayoutType type) {
  WheelGeometry g;
  g.layout = type;
  g.count = count;
  if (count == 0) return g;

  if (type == LayoutType::kRadial) {
    const double width = 360.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) g.sectors.push_back({width * static_cast<double>(i), width});
    return g;
  }

  int cols = 1;
  while (static_cast<std::size_t>(cols) * static_cast<std::size_t>(cols) < count) ++cols;
  const int rows = static_cast<int>((count + static_cast<std::size_t>(cols) - 1) / static_cast<std::size_t>(cols));
  g.columns = cols;
  g.rows = rows;
  for (std::size_t i = 0; i < count; ++i) {
    const int r = static_cast<int>(i) / cols;
    const int c = static_cast<int>(i) % cols;
    g.cells.push_back({static_cast<double>(c) / cols, static_cast<double>(r) / rows,
                       static_cast<double>(c + 1) / cols, static_cast<double>(r + 1) / rows});
  }
  return g;
}

WheelGeometry layout_wheel(const WheelSpec& spec) { return layout_wheel(spec.items.size(), spec.layout); }

double pointer_angle_deg(double dx, double dy) {
  double deg = std::atan2(dx, dy) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

namespace {

std::optional<std::size_t> radial_index(const WheelGeometry& g, double dx, double dy) {
  const double width = 360.0 / static_cast<double>(g.count);
  const double shifted = pointer_angle_deg(dx, dy) + width / 2.0;
  auto index = static_cast<std::size_t>(std::floor(shifted / width));
  return index % g.count;
}

std::optional<std::size_t> cell_index(const WheelGeometry& g, double u, double v) {
  if (!(u >= 0.0 && u < 1.0 && v >= 0.0 && v < 1.0)) return std::nullopt;
  const int col = std::min(g.columns - 1, static_cast<int>(std::floor(u * g.columns)));
  const int row = std::min(g.rows - 1, static_cast<int>(std::floor(v * g.rows)));
  const auto index = static_cast<std::size_t>(row * g.columns + col);
  if (index >= g.count) return std::nullopt;
  return index;
}

}  // namespace

std::optional<std::size_t> select_segment(const WheelGeometry& geometry, const Pointer& pointer,
                                          const SelectionParams& params) {
  if (geometry.count == 0 || std::holds_alternative<std::monostate>(pointer)) return std::nullopt;

  if (geometry.layout == LayoutType::kRadial) {
    if (geometry.count == 1) return std::size_t{0};
    if (const auto* head = std::get_if<HeadPointer>(&pointer)) {
      if (std::hypot(head->dx, head->dy) < params.head_deadzone) return std::nullopt;
      return radial_index(geometry, head->dx, head->dy);
    }
    const auto& gaze = std::get<OverlayPointer>(pointer);
    const double dx = gaze.u - 0.5;
    const double dy = 0.5 - gaze.v;
    if (std::hypot(dx, dy) / 0.5 < params.gaze_deadzone) return std::nullopt;
    return radial_index(geometry, dx, dy);
  }

  if (const auto* head = std::get_if<HeadPointer>(&pointer)) {
    constexpr double kEdge = 1.0 - 1e-9;
    const double u = std::clamp(0.5 + head->dx / (2.0 * params.head_span), 0.0, kEdge);
    const double v = std::clamp(0.5 - head->dy / (2.0 * params.head_span), 0.0, kEdge);
    return cell_index(geometry, u, v);
  }
  const auto& gaze = std::get<OverlayPointer>(pointer);
  return cell_index(geometry, gaze.u, gaze.v);
}

namespace {

std::optional<std::int64_t> lock_ms(const WheelSpec& spec) {
  if (!spec.lock_mouse_move_s) return std::nullopt;
  return static_cast<std::int64_t>(std::llround(*spec.lock_mouse_move_s * 1000.0));
}

// One-shot execution of an item: taps, clicks, chords, scroll and mode
// switches. Null and meta items do nothing.
void confirm(const WheelSpec& spec, const Action& item, std::vector<WheelCommand>& out) {
  switch (item.kind) {
    case Action::Kind::kNone:
    case Action::Kind::kMeta:
      return;
    case Action::Kind::kMode:
      out.push_back({WheelCommand::Kind::kSwitchMode, item, spec.owner, std::nullopt});
      return;
    default:
      out.push_back({WheelCommand::Kind::kPress, item, spec.owner, lock_ms(spec)});
      return;
  }
}

}  // namespace

std::vector<WheelCommand> WheelController::on_edges(const Keymap& keymap, const IntentionSet& rising,
                                                    const IntentionSet& falling, const Pointer& pointer,
                                                    std::int64_t t_ms) {
  std::vector<WheelCommand> out;

  if (open_ && falling.contains(open_->owner)) {
    // Confirms what was highlighted as of the previous frame.
    if (open_->highlighted) confirm(open_->spec, open_->spec.items[*open_->highlighted], out);
    open_.reset();
  }

  for (const auto& name : falling) {
    const auto it = std::find(holding_.begin(), holding_.end(), name);
    if (it == holding_.end()) continue;
    out.push_back({WheelCommand::Kind::kRelease, Action{}, name, std::nullopt});
    holding_.erase(it);
  }

  for (const auto& name : rising) {
    const WheelSpec* spec = keymap.find(name);
    if (spec == nullptr || spec->items.empty()) continue;
    if (!spec->single_item()) {
      open_ = OpenWheel{name, *spec, layout_wheel(*spec), std::nullopt, t_ms};
      continue;
    }
    const Action& item = spec->items.front();
    if (item.kind == Action::Kind::kKey) {
      out.push_back({WheelCommand::Kind::kHold, item, name, lock_ms(*spec)});
      holding_.push_back(name);
    } else {
      confirm(*spec, item, out);
    }
  }

  if (open_) open_->highlighted = select_segment(open_->geometry, pointer, params_);
  return out;
}

void WheelController::reset() {
  open_.reset();
  holding_.clear();
}

}  // namespace gazectl
