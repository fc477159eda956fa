#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mkinv/space.hpp"

namespace mkinv {

enum class PanelSpacing {
  Uniform,
  /// Breakpoints s_j = sMax (j/N)^2: uniform in sqrt(s), which matches the
  /// oscillation of J0(2 sqrt(t s)) and the growth of I0(2 sqrt(t s)).
  Quadratic,
};

struct QuadratureConfig {
  /// Truncation point. Operations that integrate to infinity pick it from
  /// their integrand's envelope when this is <= 0.
  double sMax = 0.0;
  int panels = 16;
  int pointsPerPanel = 16;
  double tailTol = 1e-13;
  double absTol = 1e-15;
  double relTol = 1e-13;
  int maxDepth = 40;
  PanelSpacing spacing = PanelSpacing::Quadratic;

  /// Throws InvalidArgument when a field is out of range; sMax is checked
  /// only when `requireSMax` is set.
  void validate(bool requireSMax) const;
};

/// Bound on the integrand beyond sMax: |w(s)| ||field(s)|| <= fieldSup e^{-decayRate s}.
struct TailEnvelope {
  double fieldSup = 0.0;
  double decayRate = 0.0;
};

struct QuadratureResult {
  Vector value;
  /// fieldSup e^{-decayRate sMax} / decayRate when an envelope was supplied, else 0.
  double tailBound = 0.0;
  /// Sum of accepted panel-refinement differences.
  double errorEstimate = 0.0;
  int panels = 0;
  long evaluations = 0;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Cached rule for 2 <= n <= 64.
const GaussLegendreRule& gauss_legendre(int n);

using WeightFn = std::function<double(double)>;
using FieldFn = std::function<Vector(double)>;

/// Composite Gauss-Legendre approximation of int_0^sMax w(s) field(s) ds with
/// adaptive bisection of panels whose two-level difference exceeds their share
/// of max(absTol, relTol ||result||). Panels accumulate left to right.
/// Throws QuadratureNotConverged when a panel exceeds maxDepth bisections.
QuadratureResult bochner_quadrature(const WeightFn& weight, const FieldFn& field,
                                    const QuadratureConfig& config,
                                    std::optional<TailEnvelope> envelope = std::nullopt);

/// Scalar convenience wrapper.
double scalar_quadrature(const std::function<double(double)>& integrand, double a, double b,
                         const QuadratureConfig& config);

}  // namespace mkinv
