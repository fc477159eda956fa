#pragma once

namespace mkinv {

/// Power series below this argument, Hankel asymptotic expansion above.
inline constexpr double kJ0SeriesLimit = 16.0;
/// Power series below this argument, scaled asymptotic expansion above.
inline constexpr double kI0SeriesLimit = 15.0;
/// I0 overflows a double near x = 713.98.
inline constexpr double kI0OverflowThreshold = 700.0;

/// Bessel function of the first kind, order zero. Even in x; |J0| <= 1.
double bessel_j0(double x);

/// Modified Bessel function of the first kind, order zero. Even in x.
/// Throws OverflowRisk when |x| > kI0OverflowThreshold.
double bessel_i0(double x);

/// e^{-|x|} I0(x); finite for every x.
double bessel_i0_scaled(double x);

}  // namespace mkinv
