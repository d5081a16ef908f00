#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace gazectl {

inline constexpr std::size_t kBlendShapeCount = 52;

/// The 52 Mediapipe face-blendshape identifiers, in the landmarker's output order.
const std::array<std::string_view, kBlendShapeCount>& blendshape_names();

std::optional<std::size_t> blendshape_index(std::string_view name);

/// Fixed-size vector of blendshape activations. Every value lies in [0,1].
/// Lookups by an unknown name throw std::out_of_range rather than returning 0.
class BlendShapeVector {
 public:
  BlendShapeVector() = default;

  double at(std::string_view name) const;
  void set(std::string_view name, double value);

  double operator[](std::size_t index) const { return values_[index]; }
  void set(std::size_t index, double value);

  std::span<const double, kBlendShapeCount> values() const { return values_; }

  bool operator==(const BlendShapeVector&) const = default;

 private:
  std::array<double, kBlendShapeCount> values_{};
};

}  // namespace gazectl
