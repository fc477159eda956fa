#include "mkinv/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "mkinv/bessel.hpp"
#include "mkinv/error.hpp"

namespace mkinv {

namespace {

constexpr double kLogDoubleMax = 709.0;

}  // namespace

double growth_decay_truncation(double c, double p, double logTarget, double start) {
  if (!(p > 0.0) || !(c >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "growth_decay_truncation", "need c >= 0 and p > 0",
                {{"c", c}, {"p", p}});
  }
  // The exponent peaks at c / p^2; the bound needs p > sqrt(c / s).
  double s = std::max({start, 4.0 * c / (p * p), 1e-12});
  for (int iter = 0; iter < 4000; ++iter) {
    const double slope = p - std::sqrt(c / s);
    if (slope > 0.0) {
      const double logTail = 2.0 * std::sqrt(c * s) - p * s - std::log(slope);
      if (logTail <= logTarget) return s;
    }
    s *= 1.1;
  }
  throw Error(ErrorCode::QuadratureNotConverged, "growth_decay_truncation",
              "could not bound the integrand tail", {{"c", c}, {"p", p}});
}

double exponential_truncation(double scale, double p, double target) {
  if (!(p > 0.0) || !(target > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "exponential_truncation", "need p > 0 and target > 0",
                {{"p", p}, {"target", target}});
  }
  if (scale <= 0.0) return 1.0 / p;
  return std::max(std::log(scale / (p * target)) / p, 1.0 / p);
}

LaplacePair laplace_j0_identity(double t, double alpha, const QuadratureConfig& config) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::NonPositiveAlpha, "laplace_j0_identity", "alpha must be positive", {{"alpha", alpha}});
  }
  if (!(t > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "laplace_j0_identity", "t must be positive", {{"t", t}});
  }
  QuadratureConfig cfg = config;
  if (cfg.sMax <= 0.0) cfg.sMax = exponential_truncation(1.0, alpha, cfg.tailTol);
  const WeightFn weight = [&](double s) { return std::exp(-alpha * s) * bessel_j0(2.0 * std::sqrt(t * s)); };
  const FieldFn one = [](double) { return Vector::Ones(1); };
  const QuadratureResult q = bochner_quadrature(weight, one, cfg, TailEnvelope{1.0, alpha});
  return {q.value[0], std::exp(-t / alpha) / alpha};
}

LaplacePair laplace_i0_identity(double t, double beta, const QuadratureConfig& config) {
  if (!(t > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "laplace_i0_identity", "t and beta must be positive",
                {{"t", t}, {"beta", beta}});
  }
  const double exponent = 2.0 * t * beta;
  if (exponent + std::log(beta) > kLogDoubleMax) {
    throw Error(ErrorCode::OverflowRisk, "laplace_i0_identity", "beta e^{2 t beta} exceeds double range",
                {{"exponent", exponent}});
  }
  const double rhs = beta * std::exp(exponent);
  const double p = 1.0 / beta;
  const double c = 2.0 * t;
  QuadratureConfig cfg = config;
  if (cfg.sMax <= 0.0) cfg.sMax = growth_decay_truncation(c, p, std::log(cfg.tailTol * rhs), beta);
  // I0(z) e^{-s/beta} = i0_scaled(z) e^{z - s/beta} keeps every factor finite.
  const WeightFn weight = [&](double s) {
    const double z = 2.0 * std::sqrt(c * s);
    return bessel_i0_scaled(z) * std::exp(z - p * s);
  };
  const FieldFn one = [](double) { return Vector::Ones(1); };
  const QuadratureResult q = bochner_quadrature(weight, one, cfg);
  return {q.value[0], rhs};
}

}  // namespace mkinv
