#include "mkinv/bessel.hpp"

#include <cmath>
#include <numbers>

#include "mkinv/error.hpp"

namespace mkinv {

namespace {

// The alternating J0 series loses about log10(e^x / sqrt(2 pi x)) digits to
// cancellation; long double keeps that below 1e-13 up to kJ0SeriesLimit.
long double j0_series(long double x) {
  const long double y = x * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -y / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-22L && static_cast<long double>(k) * k > y) break;
  }
  return sum;
}

// Hankel expansion J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4,
// summed up to the smallest term.
long double j0_asymptotic(long double x) {
  long double p = 1.0L;
  long double q = 0.0L;
  long double term = 1.0L;
  long double prev = 2.0L;
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= -(odd * odd) / (static_cast<long double>(k) * 8.0L * x);
    const long double mag = std::fabs(term);
    if (mag >= prev || mag < 1e-22L) break;
    prev = mag;
    // Odd k feed Q with sign (-1)^((k-1)/2), even k feed P with (-1)^(k/2);
    // term already carries (-1)^k from the recursion.
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? term : -term);
    } else {
      p += ((k / 2) % 2 == 0 ? term : -term);
    }
  }
  const long double chi = x - std::numbers::pi_v<long double> / 4.0L;
  return std::sqrt(2.0L / (std::numbers::pi_v<long double> * x)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

long double i0_series(long double x) {
  const long double y = x * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 400; ++k) {
    term *= y / (static_cast<long double>(k) * k);
    sum += term;
    if (term < 1e-21L * sum) break;
  }
  return sum;
}

// e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k prod_j (2j-1)^2 / (k! (8x)^k)
long double i0_scaled_asymptotic(long double x) {
  long double sum = 1.0L;
  long double term = 1.0L;
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    const long double next = term * (odd * odd) / (static_cast<long double>(k) * 8.0L * x);
    if (next >= term || next < 1e-21L * sum) break;
    term = next;
    sum += term;
  }
  return sum / std::sqrt(2.0L * std::numbers::pi_v<long double> * x);
}

}  // namespace

double bessel_j0(double x) {
  const long double ax = std::fabs(static_cast<long double>(x));
  if (ax <= kJ0SeriesLimit) return static_cast<double>(j0_series(ax));
  return static_cast<double>(j0_asymptotic(ax));
}

double bessel_i0_scaled(double x) {
  const long double ax = std::fabs(static_cast<long double>(x));
  if (ax <= kI0SeriesLimit) return static_cast<double>(i0_series(ax) * std::exp(-ax));
  return static_cast<double>(i0_scaled_asymptotic(ax));
}

double bessel_i0(double x) {
  const long double ax = std::fabs(static_cast<long double>(x));
  if (ax > kI0OverflowThreshold) {
    throw Error(ErrorCode::OverflowRisk, "bessel_i0", "I0 argument is beyond double range",
                {{"x", x}, {"threshold", kI0OverflowThreshold}});
  }
  if (ax <= kI0SeriesLimit) return static_cast<double>(i0_series(ax));
  return static_cast<double>(i0_scaled_asymptotic(ax) * std::exp(ax));
}

}  // namespace mkinv
