#include "mkinv/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mkinv/error.hpp"

namespace mkinv {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L;
      long double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * z * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0L);
      const long double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-19L) break;
    }
    const long double w = 2.0L / ((1.0L - z * z) * dp * dp);
    rule.nodes[i] = static_cast<double>(-z);
    rule.nodes[n - 1 - i] = static_cast<double>(z);
    rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(w);
  }
  return rule;
}

struct Panel {
  Vector value;
  double magnitude = 0.0;  // GL estimate of int |w| ||field||
};

class Integrator {
 public:
  Integrator(const WeightFn& weight, const FieldFn& field, const QuadratureConfig& config)
      : weight_(weight), field_(field), config_(config), rule_(gauss_legendre(config.pointsPerPanel)) {}

  Panel panel(double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Panel out;
    for (size_t i = 0; i < rule_.nodes.size(); ++i) {
      const double s = mid + half * rule_.nodes[i];
      const double w = weight_(s) * rule_.weights[i] * half;
      if (w == 0.0) continue;
      Vector f = field_(s);
      ++evaluations_;
      if (out.value.size() == 0) out.value = Vector::Zero(f.size());
      out.value.noalias() += w * f;
      out.magnitude += std::abs(w) * f.norm();
    }
    return out;
  }

  // Accepts the two-half estimate once it agrees with the parent to within
  // this panel's share of the tolerance or to round-off.
  void refine(double a, double b, const Panel& whole, int depth) {
    const double mid = 0.5 * (a + b);
    Panel left = panel(a, mid);
    Panel right = panel(mid, b);
    Vector sum = add(left.value, right.value, whole.value.size());
    const double diff = (sum - padded(whole.value, sum.size())).norm();
    const double share = tol_ * (b - a) / span_;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (left.magnitude + right.magnitude);
    if (diff <= std::max(share, floor)) {
      accumulate(sum);
      error_ += diff;
      ++panels_;
      return;
    }
    if (depth >= config_.maxDepth) {
      throw Error(ErrorCode::QuadratureNotConverged, "bochner_quadrature",
                  "panel refinement exhausted on [" + std::to_string(a) + ", " + std::to_string(b) + "]",
                  {{"a", a}, {"b", b}, {"difference", diff}, {"tolerance", share}});
    }
    refine(a, mid, left, depth + 1);
    refine(mid, b, right, depth + 1);
  }

  void set_tolerance(double tol, double span) {
    tol_ = tol;
    span_ = span;
  }

  Vector result() const { return total_; }
  double error() const { return error_; }
  int panels() const { return panels_; }
  long evaluations() const { return evaluations_; }

 private:
  static Vector padded(const Vector& v, Eigen::Index n) {
    return v.size() == 0 ? Vector::Zero(n) : v;
  }
  static Vector add(const Vector& a, const Vector& b, Eigen::Index fallback) {
    const Eigen::Index n = std::max({a.size(), b.size(), fallback});
    return padded(a, n) + padded(b, n);
  }
  void accumulate(const Vector& v) {
    if (v.size() == 0) return;
    if (total_.size() == 0) total_ = Vector::Zero(v.size());
    total_ += v;
  }

  const WeightFn& weight_;
  const FieldFn& field_;
  const QuadratureConfig& config_;
  const GaussLegendreRule& rule_;
  double tol_ = 0.0;
  double span_ = 1.0;
  Vector total_;
  double error_ = 0.0;
  int panels_ = 0;
  long evaluations_ = 0;
};

}  // namespace

void QuadratureConfig::validate(bool requireSMax) const {
  auto fail = [](const std::string& what, double value) {
    throw Error(ErrorCode::InvalidArgument, "QuadratureConfig", what, {{"value", value}});
  };
  if (requireSMax && !(sMax > 0.0 && std::isfinite(sMax))) fail("sMax must be positive and finite", sMax);
  if (panels < 1) fail("panels must be >= 1", panels);
  if (pointsPerPanel < 2 || pointsPerPanel > 64) fail("pointsPerPanel must lie in [2, 64]", pointsPerPanel);
  if (!(tailTol > 0.0)) fail("tailTol must be positive", tailTol);
  if (!(absTol > 0.0)) fail("absTol must be positive", absTol);
  if (!(relTol >= 0.0)) fail("relTol must be non-negative", relTol);
  if (maxDepth < 0) fail("maxDepth must be non-negative", maxDepth);
}

const GaussLegendreRule& gauss_legendre(int n) {
  static const std::array<GaussLegendreRule, 65> rules = [] {
    std::array<GaussLegendreRule, 65> out;
    for (int k = 2; k <= 64; ++k) out[k] = build_rule(k);
    return out;
  }();
  if (n < 2 || n > 64) {
    throw Error(ErrorCode::InvalidArgument, "gauss_legendre", "rule order must lie in [2, 64]",
                {{"n", double(n)}});
  }
  return rules[n];
}

QuadratureResult bochner_quadrature(const WeightFn& weight, const FieldFn& field,
                                    const QuadratureConfig& config,
                                    std::optional<TailEnvelope> envelope) {
  config.validate(true);
  Integrator integrator(weight, field, config);

  std::vector<double> breaks(config.panels + 1);
  for (int j = 0; j <= config.panels; ++j) {
    const double u = double(j) / config.panels;
    breaks[j] = config.sMax * (config.spacing == PanelSpacing::Quadratic ? u * u : u);
  }
  breaks.back() = config.sMax;

  std::vector<Panel> coarse;
  coarse.reserve(config.panels);
  Vector rough;
  for (int j = 0; j < config.panels; ++j) {
    coarse.push_back(integrator.panel(breaks[j], breaks[j + 1]));
    const Vector& v = coarse.back().value;
    if (v.size() == 0) continue;
    if (rough.size() == 0) rough = Vector::Zero(v.size());
    rough += v;
  }
  const double scale = rough.size() == 0 ? 0.0 : rough.norm();
  integrator.set_tolerance(std::max(config.absTol, config.relTol * scale), config.sMax);
  for (int j = 0; j < config.panels; ++j) integrator.refine(breaks[j], breaks[j + 1], coarse[j], 0);

  QuadratureResult out;
  out.value = integrator.result();
  if (out.value.size() == 0) out.value = field(0.0) * 0.0;
  out.errorEstimate = integrator.error();
  out.panels = integrator.panels();
  out.evaluations = integrator.evaluations();
  if (envelope && envelope->decayRate > 0.0) {
    out.tailBound = envelope->fieldSup * std::exp(-envelope->decayRate * config.sMax) / envelope->decayRate;
  }
  return out;
}

double scalar_quadrature(const std::function<double(double)>& integrand, double a, double b,
                         const QuadratureConfig& config) {
  QuadratureConfig shifted = config;
  shifted.sMax = b - a;
  const WeightFn one = [](double) { return 1.0; };
  const FieldFn field = [&](double s) {
    Vector v(1);
    v[0] = integrand(a + s);
    return v;
  };
  return bochner_quadrature(one, field, shifted).value[0];
}

}  // namespace mkinv
