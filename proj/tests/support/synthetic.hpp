#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gazectl/calibration.hpp"

namespace gazectl::testing {

// Ground truth for synthetic calibration data.
inline double true_x(double yaw) { return 40.0 * yaw + 960.0; }
inline double true_y(double pitch) { return -35.0 * pitch + 540.0; }

struct SyntheticCalibration {
  std::vector<CalibrationSample> train;     // 3x3 grid x 3 head positions
  std::vector<CalibrationSample> held_out;  // random screen points
};

/// Each sample averages `frames` gaze readings with Gaussian noise of
/// `sigma_deg` on yaw and pitch, the way a calibration target is recorded.
SyntheticCalibration synthetic_calibration(std::uint64_t seed, double sigma_deg = 2.0, int frames = 15,
                                           int held_out = 200);

double mean_error_px(const CalibrationModel& model, std::span<const CalibrationSample> samples);

}  // namespace gazectl::testing
