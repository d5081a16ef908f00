#pragma once

#include <string>
#include <string_view>

#include "gazectl/expected.hpp"
#include "gazectl/types.hpp"

namespace gazectl {

struct DecodeError {
  std::string field;  // offending field, empty for malformed text
  std::string message;

  std::string describe() const;
};

/// Maps an angle given in [0, 360) or [-180, 180) onto [-180, 180).
double normalize_gaze_angle(double degrees);

/// Encodes a frame as a single newline-free JSON record with the fields
/// t_ms, face_present, blend, head, gaze, box. Absent faces carry only the
/// first two.
std::string encode_frame(const FeatureFrame& frame);

/// Parses and validates one record. Never throws.
Expected<FeatureFrame, DecodeError> decode_frame(std::string_view line);

}  // namespace gazectl
