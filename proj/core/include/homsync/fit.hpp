#pragma once

#include <span>

#include <Eigen/Core>

#include "homsync/scan.hpp"

namespace homsync {

/// Inverted Gaussian B - A exp(-(d - d0)^2 / (2 w^2)).
double inverted_gaussian(double delay, double baseline, double depth, double center, double width);

/// Weighted least-squares fit of an inverted Gaussian to a delay scan.
struct DipFit {
  enum Param { kBaseline = 0, kDepth = 1, kCenter = 2, kWidth = 3 };

  double baseline = 0.0;
  double depth = 0.0;
  double center = 0.0;  // optimal local delay, ns
  double width = 0.0;   // Gaussian sigma, ns
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();  // (J^T W J)^-1 at the optimum
  double center_stderr = 0.0;

  double chi_square = 0.0;
  int degrees_of_freedom = 0;
  int iterations = 0;

  double stderr_of(Param p) const;
  /// B - A, the fitted rate at the dip center.
  double minimum() const { return baseline - depth; }
  double minimum_stderr() const;
};

struct FitOptions {
  int max_iterations = 200;
  double chi_square_rtol = 1e-10;
  double step_rtol = 1e-8;
};

/// Levenberg-Marquardt on the four parameters with an analytic Jacobian and
/// weights 1 / stderr^2.
///
/// Throws NoDipError for fewer than five points, flat data, a lowest rate at
/// the scan edge, or a fitted depth that is not positive or center outside
/// the scan; FitError when the iteration cap is reached or
/// the normal matrix is singular; std::invalid_argument for a non-positive
/// or non-finite standard error.
DipFit fit_inverted_gaussian(std::span<const ScanPoint> points, const FitOptions& options = {});

}  // namespace homsync
