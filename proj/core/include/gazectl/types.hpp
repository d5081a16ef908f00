#pragma once

#include <cstdint>

#include "gazectl/blendshapes.hpp"

namespace gazectl {

/// Head orientation in degrees. Positive yaw turns right, positive pitch tilts
/// up, negative roll tilts left.
struct HeadPose {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;

  bool operator==(const HeadPose&) const = default;
};

/// Gaze direction in signed degrees, [-180, 180).
struct GazeAngles {
  double yaw = 0.0;
  double pitch = 0.0;

  bool operator==(const GazeAngles&) const = default;
};

/// Face bounding box in normalized image coordinates.
struct FaceBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  bool operator==(const FaceBox&) const = default;
};

struct FeatureFrame {
  std::int64_t t_ms = 0;
  bool face_present = false;
  BlendShapeVector blend;
  HeadPose head;
  GazeAngles gaze;
  FaceBox box;

  // Signal fields only participate when a face is present.
  friend bool operator==(const FeatureFrame& a, const FeatureFrame& b) {
    if (a.t_ms != b.t_ms || a.face_present != b.face_present) return false;
    if (!a.face_present) return true;
    return a.blend == b.blend && a.head == b.head && a.gaze == b.gaze && a.box == b.box;
  }
};

struct ScreenSize {
  int width = 1920;
  int height = 1080;

  bool operator==(const ScreenSize&) const = default;
};

struct ScreenPoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const ScreenPoint&) const = default;
};

inline ScreenPoint clamp_to_screen(ScreenPoint p, ScreenSize screen) {
  const double max_x = static_cast<double>(screen.width - 1);
  const double max_y = static_cast<double>(screen.height - 1);
  p.x = p.x < 0.0 ? 0.0 : (p.x > max_x ? max_x : p.x);
  p.y = p.y < 0.0 ? 0.0 : (p.y > max_y ? max_y : p.y);
  return p;
}

}  // namespace gazectl
