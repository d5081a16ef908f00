#include "synthetic.hpp"

#include <cmath>
#include <random>

namespace gazectl::testing {

namespace {

CalibrationSample observe(std::mt19937_64& rng, double x, double y, double box_shift, double sigma, int frames) {
  std::normal_distribution<double> noise(0.0, sigma);
  const double yaw = (x - 960.0) / 40.0;
  const double pitch = (540.0 - y) / 35.0;
  double sum_yaw = 0.0, sum_pitch = 0.0;
  for (int i = 0; i < frames; ++i) {
    sum_yaw += yaw + noise(rng);
    sum_pitch += pitch + noise(rng);
  }
  CalibrationSample s;
  s.gaze = {sum_yaw / frames, sum_pitch / frames};
  s.box = {0.35 + box_shift, 0.25 + 0.5 * box_shift, 0.65 + box_shift, 0.75 + 0.5 * box_shift};
  s.target = {x, y};
  return s;
}

}  // namespace

SyntheticCalibration synthetic_calibration(std::uint64_t seed, double sigma_deg, int frames, int held_out) {
  std::mt19937_64 rng(seed);
  SyntheticCalibration out;
  for (double shift : {-0.05, 0.0, 0.05}) {
    for (double fy : {0.1, 0.5, 0.9}) {
      for (double fx : {0.1, 0.5, 0.9}) {
        out.train.push_back(observe(rng, fx * 1920.0, fy * 1080.0, shift, sigma_deg, frames));
      }
    }
  }
  std::uniform_real_distribution<double> ux(0.1 * 1920.0, 0.9 * 1920.0);
  std::uniform_real_distribution<double> uy(0.1 * 1080.0, 0.9 * 1080.0);
  std::uniform_real_distribution<double> us(-0.05, 0.05);
  for (int i = 0; i < held_out; ++i) {
    const double x = ux(rng), y = uy(rng), shift = us(rng);
    out.held_out.push_back(observe(rng, x, y, shift, sigma_deg, frames));
  }
  return out;
}

double mean_error_px(const CalibrationModel& model, std::span<const CalibrationSample> samples) {
  double total = 0.0;
  for (const auto& s : samples) {
    const auto p = predict_gaze_point(model, s.gaze, s.box, {});
    total += std::hypot(p.x - s.target.x, p.y - s.target.y);
  }
  return samples.empty() ? 0.0 : total / static_cast<double>(samples.size());
}

}  // namespace gazectl::testing
