#include "homsync/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "homsync/errors.hpp"

namespace homsync {
namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct Sample {
  double x;
  double y;
  double inv_sigma;
};

double chi_square(const std::vector<Sample>& data, const Vec4& p) {
  double sum = 0.0;
  for (const auto& s : data) {
    const double r = (s.y - inverted_gaussian(s.x, p[0], p[1], p[2], p[3])) * s.inv_sigma;
    sum += r * r;
  }
  return sum;
}

// Accumulates J^T J and J^T r for the weighted residuals r = (y - f) / sigma.
void normal_equations(const std::vector<Sample>& data, const Vec4& p, Mat4& jtj, Vec4& jtr) {
  jtj.setZero();
  jtr.setZero();
  const double w2 = p[3] * p[3];
  for (const auto& s : data) {
    const double dx = s.x - p[2];
    const double g = std::exp(-dx * dx / (2.0 * w2));
    const double f = p[0] - p[1] * g;
    Vec4 j;
    j[0] = 1.0;
    j[1] = -g;
    j[2] = -p[1] * g * dx / w2;
    j[3] = -p[1] * g * dx * dx / (w2 * p[3]);
    j *= s.inv_sigma;
    jtj.noalias() += j * j.transpose();
    jtr.noalias() += j * ((s.y - f) * s.inv_sigma);
  }
}

// Starting point from the data alone. The minimum is located on a boxcar
// smoothed copy of the rates so that a single low outlier cannot capture it.
Vec4 initial_guess(const std::vector<Sample>& data) {
  const std::size_t n = data.size();

  std::vector<double> sorted_rates(n);
  std::transform(data.begin(), data.end(), sorted_rates.begin(), [](const Sample& s) { return s.y; });
  std::sort(sorted_rates.begin(), sorted_rates.end(), std::greater<>());
  const std::size_t top = std::max<std::size_t>(1, n / 5);
  const double baseline =
      std::accumulate(sorted_rates.begin(), sorted_rates.begin() + static_cast<long>(top), 0.0) /
      static_cast<double>(top);

  const std::size_t half = n / 40;  // window of ~5% of the points
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) sum += data[k].y;
    smooth[i] = sum / static_cast<double>(hi - lo + 1);
  }
  const auto min_it = std::min_element(smooth.begin(), smooth.end());
  const auto min_idx = static_cast<std::size_t>(min_it - smooth.begin());
  const double depth = baseline - *min_it;
  if (!(depth > 0.0)) throw NoDipError("fit_inverted_gaussian: no dip below the baseline");
  if (min_idx <= half || min_idx + half >= n - 1) {
    throw NoDipError("fit_inverted_gaussian: lowest rate at the edge of the scan");
  }

  const double half_level = baseline - 0.5 * depth;
  double lo_x = data[min_idx].x;
  double hi_x = data[min_idx].x;
  for (std::size_t i = 0; i < n; ++i) {
    if (smooth[i] < half_level) {
      lo_x = std::min(lo_x, data[i].x);
      hi_x = std::max(hi_x, data[i].x);
    }
  }
  double width = 0.5 * (hi_x - lo_x);
  if (!(width > 0.0)) width = (data.back().x - data.front().x) / 10.0;
  return {baseline, depth, data[min_idx].x, width};
}

}  // namespace

double inverted_gaussian(double delay, double baseline, double depth, double center, double width) {
  const double dx = delay - center;
  return baseline - depth * std::exp(-dx * dx / (2.0 * width * width));
}

double DipFit::stderr_of(Param p) const { return std::sqrt(std::max(0.0, covariance(p, p))); }

double DipFit::minimum_stderr() const {
  const double var = covariance(kBaseline, kBaseline) + covariance(kDepth, kDepth) -
                     2.0 * covariance(kBaseline, kDepth);
  return std::sqrt(std::max(0.0, var));
}

DipFit fit_inverted_gaussian(std::span<const ScanPoint> points, const FitOptions& options) {
  if (points.size() < 5) {
    throw NoDipError("fit_inverted_gaussian: need at least 5 scan points");
  }
  std::vector<Sample> data;
  data.reserve(points.size());
  for (const auto& pt : points) {
    if (!(pt.std_error > 0.0) || !std::isfinite(pt.std_error)) {
      throw std::invalid_argument("fit_inverted_gaussian: standard errors must be finite and > 0");
    }
    data.push_back({pt.delay, pt.rate, 1.0 / pt.std_error});
  }
  std::sort(data.begin(), data.end(), [](const Sample& a, const Sample& b) { return a.x < b.x; });
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end(),
                                            [](const Sample& a, const Sample& b) { return a.y < b.y; });
  if (hi->y - lo->y <= 1e-12 * std::max(1.0, std::fabs(hi->y))) {
    throw NoDipError("fit_inverted_gaussian: scan is flat");
  }

  Vec4 p = initial_guess(data);
  double chi2 = chi_square(data, p);
  double lambda = 1e-3;
  Mat4 jtj;
  Vec4 jtr;
  int iter = 0;
  bool converged = false;

  while (!converged) {
    if (iter >= options.max_iterations) {
      throw FitError("fit_inverted_gaussian: no convergence within iteration cap",
                     {p[0], p[1], p[2], std::fabs(p[3])}, iter);
    }
    ++iter;
    normal_equations(data, p, jtj, jtr);

    bool accepted = false;
    while (!accepted) {
      Mat4 damped = jtj;
      for (int i = 0; i < 4; ++i) damped(i, i) += lambda * std::max(jtj(i, i), 1e-300);
      const Vec4 step = damped.ldlt().solve(jtr);
      const Vec4 trial = p + step;
      const double trial_chi2 = step.allFinite() ? chi_square(data, trial) : std::numeric_limits<double>::infinity();

      if (trial_chi2 <= chi2) {
        const double drop = chi2 - trial_chi2;
        const bool small_chi2 = drop <= options.chi_square_rtol * std::max(chi2, 1e-300);
        bool small_step = true;
        for (int i = 0; i < 4; ++i) {
          if (std::fabs(step[i]) > options.step_rtol * (std::fabs(trial[i]) + 1e-12)) {
            small_step = false;
          }
        }
        p = trial;
        chi2 = trial_chi2;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        converged = small_chi2 || small_step;
      } else {
        lambda *= 10.0;
        if (lambda > 1e16) {
          // No descent direction left: already at the minimum.
          accepted = true;
          converged = true;
        }
      }
    }
  }

  p[3] = std::fabs(p[3]);
  if (!(p[1] > 0.0)) throw NoDipError("fit_inverted_gaussian: fitted depth is not positive");
  if (p[2] < data.front().x || p[2] > data.back().x) {
    throw NoDipError("fit_inverted_gaussian: fitted center outside the scan");
  }

  normal_equations(data, p, jtj, jtr);
  Eigen::FullPivLU<Mat4> lu(jtj);
  if (!lu.isInvertible()) {
    throw FitError("fit_inverted_gaussian: singular normal matrix", {p[0], p[1], p[2], p[3]}, iter);
  }
  DipFit fit;
  fit.baseline = p[0];
  fit.depth = p[1];
  fit.center = p[2];
  fit.width = p[3];
  fit.covariance = lu.inverse();
  fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose()).eval();
  fit.center_stderr = fit.stderr_of(DipFit::kCenter);
  fit.chi_square = chi2;
  fit.degrees_of_freedom = static_cast<int>(data.size()) - 4;
  fit.iterations = iter;
  return fit;
}

}  // namespace homsync
