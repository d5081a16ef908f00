#include "gazectl/blendshapes.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gazectl {
namespace {

constexpr std::array<std::string_view, kBlendShapeCount> kNames = {
    "_neutral",          "browDownLeft",        "browDownRight",     "browInnerUp",
    "browOuterUpLeft",   "browOuterUpRight",    "cheekPuff",         "cheekSquintLeft",
    "cheekSquintRight",  "eyeBlinkLeft",        "eyeBlinkRight",     "eyeLookDownLeft",
    "eyeLookDownRight",  "eyeLookInLeft",       "eyeLookInRight",    "eyeLookOutLeft",
    "eyeLookOutRight",   "eyeLookUpLeft",       "eyeLookUpRight",    "eyeSquintLeft",
    "eyeSquintRight",    "eyeWideLeft",         "eyeWideRight",      "jawForward",
    "jawLeft",           "jawOpen",             "jawRight",          "mouthClose",
    "mouthDimpleLeft",   "mouthDimpleRight",    "mouthFrownLeft",    "mouthFrownRight",
    "mouthFunnel",       "mouthLeft",           "mouthLowerDownLeft", "mouthLowerDownRight",
    "mouthPressLeft",    "mouthPressRight",     "mouthPucker",       "mouthRight",
    "mouthRollLower",    "mouthRollUpper",      "mouthShrugLower",   "mouthShrugUpper",
    "mouthSmileLeft",    "mouthSmileRight",     "mouthStretchLeft",  "mouthStretchRight",
    "mouthUpperUpLeft",  "mouthUpperUpRight",   "noseSneerLeft",     "noseSneerRight",
};

void check_range(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("blendshape value out of [0,1]: " + std::to_string(value));
  }
}

}  // namespace

const std::array<std::string_view, kBlendShapeCount>& blendshape_names() { return kNames; }

std::optional<std::size_t> blendshape_index(std::string_view name) {
  const auto it = std::find(kNames.begin(), kNames.end(), name);
  if (it == kNames.end()) return std::nullopt;
  return static_cast<std::size_t>(it - kNames.begin());
}

double BlendShapeVector::at(std::string_view name) const {
  const auto index = blendshape_index(name);
  if (!index) throw std::out_of_range("unknown blendshape: " + std::string(name));
  return values_[*index];
}

void BlendShapeVector::set(std::string_view name, double value) {
  const auto index = blendshape_index(name);
  if (!index) throw std::out_of_range("unknown blendshape: " + std::string(name));
  set(*index, value);
}

void BlendShapeVector::set(std::size_t index, double value) {
  if (index >= kBlendShapeCount) throw std::out_of_range("blendshape index out of range");
  check_range(value);
  values_[index] = value;
}

}  // namespace gazectl
