#include "homsync/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace homsync {
namespace {

constexpr double kSeriesLimit = 30.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("bessel_i0: argument must be finite");
  }
}

// Sum_{k >= first} (x^2/4)^k / (k!)^2. Every term is positive, so the sum
// carries no cancellation for any x.
double ascending_series(double ax, int first) {
  const double q = 0.25 * ax * ax;
  double term = 1.0;
  for (int k = 1; k <= first; ++k) {
    term *= q / (static_cast<double>(k) * k);
  }
  double sum = term;
  for (int k = first + 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term <= kEps * sum * 0.25) break;
  }
  return sum;
}

double hankel_asymptotic(double ax) {
  // I0(x) ~ e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
  double term = 1.0;
  double sum = 1.0;
  const double inv8x = 1.0 / (8.0 * ax);
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) * inv8x / k;
    if (next >= term) break;  // series starts diverging
    term = next;
    sum += term;
    if (term <= kEps * sum * 0.25) break;
  }
  // Split the exponential so the prefactor does not overflow early.
  const double half = std::exp(0.5 * ax);
  return half * (half / std::sqrt(2.0 * std::numbers::pi * ax)) * sum;
}

}  // namespace

double bessel_i0(double x) {
  require_finite(x);
  const double ax = std::fabs(x);
  if (ax <= kSeriesLimit) return ascending_series(ax, 0);
  return hankel_asymptotic(ax);
}

double bessel_i0m1(double x) {
  require_finite(x);
  const double ax = std::fabs(x);
  if (ax <= 1.0) return ascending_series(ax, 1);
  return bessel_i0(ax) - 1.0;
}

}  // namespace homsync
