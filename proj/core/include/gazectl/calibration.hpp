#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gazectl/expected.hpp"
#include "gazectl/types.hpp"

namespace gazectl {

/// Regressor inputs: gaze yaw, gaze pitch, box x0, y0, x1, y1.
inline constexpr std::size_t kFeatureCount = 6;

struct CalibrationSample {
  GazeAngles gaze;
  FaceBox box;
  ScreenPoint target;

  bool operator==(const CalibrationSample&) const = default;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::array<double, kFeatureCount> feature_row(const GazeAngles& gaze, const FaceBox& box);

/// Column-wise z-scoring parameters. Columns whose spread is numerically zero
/// are flagged; their stddev is stored as 1 and their standardized values and
/// coefficients are forced to 0.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<bool> zero_variance;

  bool operator==(const Standardization&) const = default;
};

Standardization fit_standardization(const Eigen::MatrixXd& raw);
Eigen::MatrixXd standardize(const Standardization& params, const Eigen::MatrixXd& raw);

struct Design {
  Eigen::MatrixXd features;  // standardized, n x 6
  Eigen::MatrixXd raw;       // n x 6
  Eigen::VectorXd targets_x;
  Eigen::VectorXd targets_y;
  Standardization standardization;
};

/// Needs at least 8 samples (more than features + 1). Throws CalibrationError.
Design build_design(std::span<const CalibrationSample> samples);

struct LassoOptions {
  double tolerance = 1e-6;  // max absolute coefficient change per sweep
  int max_sweeps = 1000;
  bool record_objective = false;
};

struct LassoFit {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective;  // after each sweep, when requested
};

/// Minimizes (1/2n)||y - Xw - b||^2 + lambda*||w||_1 by cyclic coordinate
/// descent with soft-thresholding. The intercept is unpenalized:
/// b = mean(y - Xw). Non-convergence is reported through `converged` and
/// `sweeps`; the last iterate is still returned.
LassoFit fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                   const LassoOptions& options = {});

double lasso_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& coefficients, double intercept, double lambda);

/// 20 values log-spaced over [1e-4, 1e2].
std::vector<double> default_lambda_grid();

struct CrossValidation {
  double lambda = 0.0;
  double mse = 0.0;
  std::vector<double> grid_mse;  // aligned with the grid passed in
};

inline constexpr int kDefaultFolds = 5;
inline constexpr std::uint64_t kDefaultShuffleSeed = 0x5eed5eedULL;

/// K-fold cross-validation over `grid`. Rows are shuffled with a seeded
/// Fisher-Yates pass and split into contiguous folds; each training fold is
/// re-standardized. MSE is averaged over all target columns. Ties go to the
/// larger lambda. Needs at least 2 * folds rows.
CrossValidation cross_validate(const Eigen::MatrixXd& raw_features, const Eigen::MatrixXd& targets,
                               std::span<const double> grid, int folds = kDefaultFolds,
                               std::uint64_t seed = kDefaultShuffleSeed);

CrossValidation cross_validate(std::span<const CalibrationSample> samples,
                               std::span<const double> grid, int folds = kDefaultFolds,
                               std::uint64_t seed = kDefaultShuffleSeed);

struct CalibrationModel {
  std::vector<double> coef_x;
  std::vector<double> coef_y;
  double intercept_x = 0.0;
  double intercept_y = 0.0;
  std::vector<double> feat_mean;
  std::vector<double> feat_std;
  double lambda = 0.0;
  double cv_mse = 0.0;

  bool operator==(const CalibrationModel&) const = default;

  /// A model with zero coefficients that always predicts (x, y).
  static CalibrationModel constant(double x, double y);
};

inline constexpr std::size_t kMinCalibrationSamples = 16;

CalibrationModel fit_calibration(std::span<const CalibrationSample> samples);
CalibrationModel fit_calibration(std::span<const CalibrationSample> samples,
                                 std::span<const double> grid);

/// Linear prediction per axis, clamped to [0, width) x [0, height).
ScreenPoint predict_gaze_point(const CalibrationModel& model, const GazeAngles& gaze,
                               const FaceBox& box, ScreenSize screen);

// Model persistence: a JSON document with the fields coef_x, coef_y,
// intercept_x, intercept_y, feat_mean, feat_std, lambda, cv_mse.
std::string serialize_model(const CalibrationModel& model);
Expected<CalibrationModel, std::string> parse_model(std::string_view text);
Expected<CalibrationModel, std::string> load_model(const std::string& path);
void save_model(const CalibrationModel& model, const std::string& path);

/// Samples collected by a calibration session, as written by the operator UI.
struct CalibrationSampleSet {
  ScreenSize screen;
  bool complete = true;
  std::vector<CalibrationSample> samples;

  bool operator==(const CalibrationSampleSet&) const = default;
};

std::string serialize_samples(const CalibrationSampleSet& set);
Expected<CalibrationSampleSet, std::string> parse_samples(std::string_view text);
Expected<CalibrationSampleSet, std::string> load_samples(const std::string& path);

}  // namespace gazectl
