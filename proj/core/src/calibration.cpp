#include "gazectl/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace gazectl {
namespace {

constexpr std::size_t kMinDesignSamples = kFeatureCount + 2;

double soft_threshold(double value, double lambda) {
  if (value > lambda) return value - lambda;
  if (value < -lambda) return value + lambda;
  return 0.0;
}

bool is_zero_variance(double stddev, double mean) {
  return stddev <= 1e-12 * std::max(1.0, std::abs(mean));
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // mt19937_64's output sequence is fixed by the standard, unlike
  // std::shuffle and the distributions, so folds match across toolchains.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

void zero_flagged(const Standardization& params, Eigen::VectorXd& coefficients) {
  for (std::size_t j = 0; j < params.zero_variance.size(); ++j) {
    if (params.zero_variance[j]) coefficients(static_cast<Eigen::Index>(j)) = 0.0;
  }
}

}  // namespace

std::array<double, kFeatureCount> feature_row(const GazeAngles& gaze, const FaceBox& box) {
  return {gaze.yaw, gaze.pitch, box.x0, box.y0, box.x1, box.y1};
}

Standardization fit_standardization(const Eigen::MatrixXd& raw) {
  const auto cols = static_cast<std::size_t>(raw.cols());
  Standardization params;
  params.mean.resize(cols);
  params.stddev.resize(cols);
  params.zero_variance.resize(cols);
  const double n = static_cast<double>(raw.rows());
  for (std::size_t j = 0; j < cols; ++j) {
    const auto col = raw.col(static_cast<Eigen::Index>(j));
    const double mean = col.sum() / n;
    const double var = (col.array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    params.mean[j] = mean;
    params.zero_variance[j] = is_zero_variance(sd, mean);
    params.stddev[j] = params.zero_variance[j] ? 1.0 : sd;
  }
  return params;
}

Eigen::MatrixXd standardize(const Standardization& params, const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    if (params.zero_variance[k]) {
      out.col(j).setZero();
    } else {
      out.col(j) = (raw.col(j).array() - params.mean[k]) / params.stddev[k];
    }
  }
  return out;
}

Design build_design(std::span<const CalibrationSample> samples) {
  if (samples.size() < kMinDesignSamples) {
    throw CalibrationError("too few calibration samples: " + std::to_string(samples.size()) +
                           " (need at least " + std::to_string(kMinDesignSamples) + ")");
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  Design design;
  design.raw.resize(n, static_cast<Eigen::Index>(kFeatureCount));
  design.targets_x.resize(n);
  design.targets_y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    const auto row = feature_row(s.gaze, s.box);
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      if (!std::isfinite(row[j])) throw CalibrationError("non-finite feature in sample " + std::to_string(i));
      design.raw(i, static_cast<Eigen::Index>(j)) = row[j];
    }
    if (!std::isfinite(s.target.x) || !std::isfinite(s.target.y)) {
      throw CalibrationError("non-finite target in sample " + std::to_string(i));
    }
    design.targets_x(i) = s.target.x;
    design.targets_y(i) = s.target.y;
  }
  design.standardization = fit_standardization(design.raw);
  design.features = standardize(design.standardization, design.raw);
  return design;
}

double lasso_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& coefficients, double intercept, double lambda) {
  const double n = static_cast<double>(x.rows());
  const Eigen::VectorXd residual = y - x * coefficients - Eigen::VectorXd::Constant(y.size(), intercept);
  return residual.squaredNorm() / (2.0 * n) + lambda * coefficients.lpNorm<1>();
}

LassoFit fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                   const LassoOptions& options) {
  if (lambda < 0.0 || !std::isfinite(lambda)) throw CalibrationError("lambda must be finite and >= 0");
  if (x.rows() != y.size() || x.rows() == 0) throw CalibrationError("design/target size mismatch");

  const double n = static_cast<double>(x.rows());
  const Eigen::Index p = x.cols();

  // Solve on centered data; the unpenalized intercept then falls out as
  // mean(y) - mean(x) . w, which equals mean(y - Xw).
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const double y_mean = y.mean();
  const Eigen::VectorXd yc = y.array() - y_mean;
  const Eigen::VectorXd col_sq = xc.colwise().squaredNorm().transpose() / n;

  LassoFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd residual = yc;

  auto objective = [&] {
    return residual.squaredNorm() / (2.0 * n) + lambda * fit.coefficients.lpNorm<1>();
  };

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double z = col_sq(j);
      const double old = fit.coefficients(j);
      double updated = 0.0;
      if (z > 0.0) {
        const double rho = xc.col(j).dot(residual) / n + z * old;
        updated = soft_threshold(rho, lambda) / z;
      }
      const double delta = updated - old;
      if (delta != 0.0) {
        residual.noalias() -= delta * xc.col(j);
        fit.coefficients(j) = updated;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    fit.sweeps = sweep + 1;
    if (options.record_objective) fit.objective.push_back(objective());
    if (max_delta < options.tolerance) {
      fit.converged = true;
      break;
    }
  }

  fit.intercept = y_mean - x_mean.dot(fit.coefficients);
  return fit;
}

std::vector<double> default_lambda_grid() {
  constexpr int kCount = 20;
  const double lo = std::log10(1e-4);
  const double hi = std::log10(1e2);
  std::vector<double> grid(kCount);
  for (int i = 0; i < kCount; ++i) {
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / (kCount - 1));
  }
  return grid;
}

CrossValidation cross_validate(const Eigen::MatrixXd& raw_features, const Eigen::MatrixXd& targets,
                               std::span<const double> grid, int folds, std::uint64_t seed) {
  if (grid.empty()) throw CalibrationError("empty lambda grid");
  if (folds < 2) throw CalibrationError("cross-validation needs at least 2 folds");
  const auto n = static_cast<std::size_t>(raw_features.rows());
  if (n < 2 * static_cast<std::size_t>(folds)) {
    throw CalibrationError("too few samples for " + std::to_string(folds) + "-fold cross-validation: " +
                           std::to_string(n));
  }
  if (targets.rows() != raw_features.rows()) throw CalibrationError("feature/target row mismatch");

  const auto order = seeded_permutation(n, seed);
  const std::size_t base = n / static_cast<std::size_t>(folds);
  const std::size_t extra = n % static_cast<std::size_t>(folds);

  std::vector<double> sse(grid.size(), 0.0);
  std::size_t start = 0;
  for (int f = 0; f < folds; ++f) {
    const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    std::vector<std::size_t> val(order.begin() + static_cast<std::ptrdiff_t>(start),
                                 order.begin() + static_cast<std::ptrdiff_t>(start + size));
    std::vector<std::size_t> train;
    train.reserve(n - size);
    train.insert(train.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(start));
    train.insert(train.end(), order.begin() + static_cast<std::ptrdiff_t>(start + size), order.end());
    start += size;

    const Eigen::MatrixXd train_raw = select_rows(raw_features, train);
    const Standardization params = fit_standardization(train_raw);
    const Eigen::MatrixXd train_x = standardize(params, train_raw);
    const Eigen::MatrixXd val_x = standardize(params, select_rows(raw_features, val));
    const Eigen::MatrixXd train_y = select_rows(targets, train);
    const Eigen::MatrixXd val_y = select_rows(targets, val);

    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (Eigen::Index c = 0; c < targets.cols(); ++c) {
        LassoFit fit = fit_lasso(train_x, train_y.col(c), grid[g]);
        zero_flagged(params, fit.coefficients);
        const Eigen::VectorXd pred =
            (val_x * fit.coefficients).array() + fit.intercept;
        sse[g] += (val_y.col(c) - pred).squaredNorm();
      }
    }
  }

  CrossValidation result;
  const double denom = static_cast<double>(n) * static_cast<double>(targets.cols());
  result.grid_mse.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) result.grid_mse[g] = sse[g] / denom;

  const double best = *std::min_element(result.grid_mse.begin(), result.grid_mse.end());
  const double tie = 1e-12 * std::max(1.0, std::abs(best));
  bool chosen = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (result.grid_mse[g] <= best + tie && (!chosen || grid[g] > result.lambda)) {
      result.lambda = grid[g];
      result.mse = result.grid_mse[g];
      chosen = true;
    }
  }
  return result;
}

CrossValidation cross_validate(std::span<const CalibrationSample> samples,
                               std::span<const double> grid, int folds, std::uint64_t seed) {
  const Design design = build_design(samples);
  Eigen::MatrixXd targets(design.targets_x.size(), 2);
  targets.col(0) = design.targets_x;
  targets.col(1) = design.targets_y;
  return cross_validate(design.raw, targets, grid, folds, seed);
}

CalibrationModel CalibrationModel::constant(double x, double y) {
  CalibrationModel model;
  model.coef_x.assign(kFeatureCount, 0.0);
  model.coef_y.assign(kFeatureCount, 0.0);
  model.intercept_x = x;
  model.intercept_y = y;
  model.feat_mean.assign(kFeatureCount, 0.0);
  model.feat_std.assign(kFeatureCount, 1.0);
  return model;
}

CalibrationModel fit_calibration(std::span<const CalibrationSample> samples) {
  const auto grid = default_lambda_grid();
  return fit_calibration(samples, grid);
}

CalibrationModel fit_calibration(std::span<const CalibrationSample> samples,
                                 std::span<const double> grid) {
  if (samples.size() < kMinCalibrationSamples) {
    throw CalibrationError("too few calibration samples: " + std::to_string(samples.size()) +
                           " (need at least " + std::to_string(kMinCalibrationSamples) + ")");
  }
  const Design design = build_design(samples);
  Eigen::MatrixXd targets(design.targets_x.size(), 2);
  targets.col(0) = design.targets_x;
  targets.col(1) = design.targets_y;
  const CrossValidation cv = cross_validate(design.raw, targets, grid);

  LassoFit fx = fit_lasso(design.features, design.targets_x, cv.lambda);
  LassoFit fy = fit_lasso(design.features, design.targets_y, cv.lambda);
  zero_flagged(design.standardization, fx.coefficients);
  zero_flagged(design.standardization, fy.coefficients);

  CalibrationModel model;
  model.coef_x.assign(fx.coefficients.data(), fx.coefficients.data() + fx.coefficients.size());
  model.coef_y.assign(fy.coefficients.data(), fy.coefficients.data() + fy.coefficients.size());
  model.intercept_x = fx.intercept;
  model.intercept_y = fy.intercept;
  model.feat_mean = design.standardization.mean;
  model.feat_std = design.standardization.stddev;
  model.lambda = cv.lambda;
  model.cv_mse = cv.mse;
  return model;
}

ScreenPoint predict_gaze_point(const CalibrationModel& model, const GazeAngles& gaze,
                               const FaceBox& box, ScreenSize screen) {
  const auto row = feature_row(gaze, box);
  ScreenPoint p{model.intercept_x, model.intercept_y};
  const std::size_t count = std::min({row.size(), model.coef_x.size(), model.coef_y.size(),
                                      model.feat_mean.size(), model.feat_std.size()});
  for (std::size_t j = 0; j < count; ++j) {
    const double z = (row[j] - model.feat_mean[j]) / model.feat_std[j];
    p.x += model.coef_x[j] * z;
    p.y += model.coef_y[j] * z;
  }
  if (!std::isfinite(p.x)) p.x = 0.0;
  if (!std::isfinite(p.y)) p.y = 0.0;
  return clamp_to_screen(p, screen);
}

}  // namespace gazectl
