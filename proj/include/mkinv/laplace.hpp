#pragma once

#include "mkinv/quadrature.hpp"

namespace mkinv {

struct LaplacePair {
  double lhs = 0.0;  // quadrature
  double rhs = 0.0;  // closed form
};

/// int_0^inf e^{-alpha s} J0(2 sqrt(t s)) ds  vs  e^{-t/alpha} / alpha.
/// Throws NonPositiveAlpha, InvalidArgument (t <= 0), QuadratureNotConverged.
LaplacePair laplace_j0_identity(double t, double alpha, const QuadratureConfig& config = {});

/// int_0^inf e^{-s/beta} I0(2 sqrt(2 t s)) ds  vs  beta e^{2 t beta}.
/// Throws OverflowRisk when 2 t beta leaves double range.
LaplacePair laplace_i0_identity(double t, double beta, const QuadratureConfig& config = {});

/// Smallest s >= start (found by geometric search) at which the tail bound
///   int_s^inf exp(2 sqrt(c u) - p u) du <= exp(2 sqrt(c s) - p s) / (p - sqrt(c / s))
/// drops below exp(logTarget). The bound holds because the exponent is concave.
/// Requires c >= 0, p > 0.
double growth_decay_truncation(double c, double p, double logTarget, double start = 1.0);

/// Smallest s with scale e^{-p s} / p <= target.
double exponential_truncation(double scale, double p, double target);

}  // namespace mkinv
