#pragma once

namespace homsync {

/// Modified Bessel function of the first kind, order zero.
///
/// Ascending power series for |x| <= 30, Hankel asymptotic expansion above.
/// Relative error is at the level of a few ulp over the whole finite range;
/// the result overflows to +inf for |x| beyond roughly 713.
///
/// Throws std::domain_error for NaN or infinite input.
double bessel_i0(double x);

/// I0(x) - 1 without cancellation for small |x|.
double bessel_i0m1(double x);

}  // namespace homsync
