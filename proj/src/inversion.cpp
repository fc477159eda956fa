#include "mkinv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mkinv/bessel.hpp"
#include "mkinv/error.hpp"

namespace mkinv {

namespace {

constexpr double kLogDoubleMax = 709.0;

void require_alpha(double alpha, const char* op) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::NonPositiveAlpha, op, "alpha must be positive", {{"alpha", alpha}});
  }
}

void require_length(const SpectralDecomposition& dec, const Vector& f, const char* op) {
  if (f.size() != dec.size()) {
    throw Error(ErrorCode::LengthMismatch, op, "vector length does not match the state space",
                {{"expected", double(dec.size())}, {"actual", double(f.size())}});
  }
}

// log(sum_k exp(terms_k)) without overflow.
double log_sum_exp(const std::vector<double>& terms) {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double v : terms) sum += std::exp(v - top);
  return top + std::log(sum);
}

double max_lambda(const SpectralDecomposition& dec, const std::vector<Eigen::Index>& modes) {
  double out = 0.0;
  for (Eigen::Index k : modes) out = std::max(out, dec.eigenvalues()[k]);
  return out;
}

void check_amplification(double lambdaMax, double horizon, const char* op) {
  const double exponent = lambdaMax * horizon;
  if (exponent > kLogDoubleMax) {
    throw Error(ErrorCode::OverflowRisk, op, "e^{lambda_max T} exceeds double range",
                {{"exponent", exponent}, {"lambdaMax", lambdaMax}, {"T", horizon}});
  }
}

// Coefficients of P_T^{-1} g: e^{lambda_k T} (phi_k, g) on significant modes.
Vector inverse_coefficients(const InverseProblem& problem, const InversionOptions& options,
                            const char* op) {
  const SpectralDecomposition& dec = problem.dec();
  const Vector c = dec.coefficients(problem.data());
  const auto modes = significant_modes(dec, problem.data(), options.energyTol);
  check_amplification(max_lambda(dec, modes), problem.horizon(), op);
  Vector out = Vector::Zero(dec.size());
  for (Eigen::Index k : modes) out[k] = std::exp(dec.eigenvalues()[k] * problem.horizon()) * c[k];
  return out;
}

}  // namespace

InverseProblem::InverseProblem(const SpectralDecomposition& dec, double horizon, Vector g)
    : dec_(&dec), horizon_(horizon), g_(std::move(g)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw Error(ErrorCode::InvalidArgument, "InverseProblem", "horizon T must be positive", {{"T", horizon_}});
  }
  require_length(dec, g_, "InverseProblem");
  if (!g_.allFinite()) throw Error(ErrorCode::InvalidArgument, "InverseProblem", "g has non-finite entries");
}

const char* to_string(WellPosedness flag) {
  switch (flag) {
    case WellPosedness::Ok: return "ok";
    case WellPosedness::Warning: return "warning";
    case WellPosedness::Severe: return "severe";
  }
  return "ok";
}

std::vector<Eigen::Index> significant_modes(const SpectralDecomposition& dec, const Vector& g,
                                            double energyTol) {
  const Vector c = dec.coefficients(g);
  const double total = c.squaredNorm();
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (c[k] != 0.0 && c[k] * c[k] > energyTol * total) out.push_back(k);
  }
  return out;
}

Vector j_alpha_spectral(const SpectralDecomposition& dec, double alpha, double t, const Vector& f) {
  require_alpha(alpha, "j_alpha_spectral");
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "j_alpha_spectral", "t must be non-negative", {{"t", t}});
  Vector mult(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    const double r = 1.0 / (dec.eigenvalues()[k] + alpha);
    mult[k] = r * std::exp(-t * r);
  }
  return dec.apply_multipliers(mult, f);
}

Vector j_alpha_quadrature(const SpectralDecomposition& dec, double alpha, double t, const Vector& f,
                          const QuadratureConfig& config) {
  require_alpha(alpha, "j_alpha_quadrature");
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "j_alpha_quadrature", "t must be non-negative", {{"t", t}});
  const Vector c = dec.coefficients(f);
  const double fnorm = c.norm();
  if (fnorm == 0.0) return Vector::Zero(dec.size());

  QuadratureConfig cfg = config;
  if (cfg.sMax <= 0.0) cfg.sMax = exponential_truncation(fnorm, alpha, cfg.tailTol);
  const Vector& lambda = dec.eigenvalues();
  // P_s f in eigen-coordinates; the Bochner integral commutes with synthesis.
  const FieldFn field = [&](double s) -> Vector { return (-lambda * s).array().exp() * c.array(); };
  const WeightFn weight = [&](double s) { return bessel_j0(2.0 * std::sqrt(t * s)) * std::exp(-alpha * s); };
  const QuadratureResult q = bochner_quadrature(weight, field, cfg, TailEnvelope{fnorm, alpha});
  return dec.synthesize(q.value);
}

double membership_quadrature(const InverseProblem& problem, double alpha, double sMax,
                             const QuadratureConfig& config, const InversionOptions& options) {
  require_alpha(alpha, "membership_quadrature");
  const SpectralDecomposition& dec = problem.dec();
  const Vector c = dec.coefficients(problem.data());
  const auto modes = significant_modes(dec, problem.data(), options.energyTol);
  if (modes.empty()) return 0.0;
  const double twoT = 2.0 * problem.horizon();
  if (2.0 * std::sqrt(twoT * sMax) > kLogDoubleMax) {
    throw Error(ErrorCode::OverflowRisk, "membership_quadrature", "I0 weight leaves double range",
                {{"sMax", sMax}});
  }
  QuadratureConfig cfg = config;
  cfg.sMax = sMax;
  // I0(z) (J^alpha_s g, g) = i0_scaled(z) sum_k c_k^2 r_k e^{z - r_k s}, r_k = 1/(lambda_k + alpha).
  const WeightFn weight = [&](double s) { return bessel_i0_scaled(2.0 * std::sqrt(twoT * s)); };
  const FieldFn field = [&](double s) -> Vector {
    const double z = 2.0 * std::sqrt(twoT * s);
    double sum = 0.0;
    for (Eigen::Index k : modes) {
      const double r = 1.0 / (dec.eigenvalues()[k] + alpha);
      sum += c[k] * c[k] * r * std::exp(z - r * s);
    }
    return Vector::Constant(1, sum);
  };
  return bochner_quadrature(weight, field, cfg).value[0];
}

ConditioningReport membership_criterion(const InverseProblem& problem, double alpha,
                                        const QuadratureConfig& config, const InversionOptions& options) {
  require_alpha(alpha, "membership_criterion");
  const SpectralDecomposition& dec = problem.dec();
  const double T = problem.horizon();
  const Vector c = dec.coefficients(problem.data());
  const auto modes = significant_modes(dec, problem.data(), options.energyTol);

  ConditioningReport report;
  report.lambdaMax = max_lambda(dec, modes);
  report.amplificationLog10 = report.lambdaMax * T / std::numbers::ln10;

  std::vector<double> logTerms;
  for (Eigen::Index k : modes) {
    logTerms.push_back(2.0 * T * (dec.eigenvalues()[k] + alpha) + std::log(c[k] * c[k]));
  }
  const double logSpectral = log_sum_exp(logTerms);
  report.membershipSpectralLog10 = logSpectral / std::numbers::ln10;
  report.membershipSpectral =
      logSpectral > kLogDoubleMax ? std::numeric_limits<double>::infinity() : std::exp(logSpectral);

  if (report.amplificationLog10 >= options.severeLog10) {
    report.flag = WellPosedness::Severe;
  } else if (report.amplificationLog10 >= options.warningLog10) {
    report.flag = WellPosedness::Warning;
  }

  if (!modes.empty() && logSpectral < kLogDoubleMax - 10.0) {
    // Truncate where every mode's tail falls below tailTol times the total.
    double sMax = 0.0;
    for (Eigen::Index k : modes) {
      const double r = 1.0 / (dec.eigenvalues()[k] + alpha);
      const double logTarget = std::log(config.tailTol) + logSpectral - std::log(c[k] * c[k] * r);
      sMax = std::max(sMax, growth_decay_truncation(2.0 * T, r, logTarget, 1.0));
    }
    if (config.sMax > 0.0) sMax = config.sMax;
    if (2.0 * std::sqrt(2.0 * T * sMax) <= kLogDoubleMax) {
      report.membershipQuadrature = membership_quadrature(problem, alpha, sMax, config, options);
    }
  }
  return report;
}

Vector invert_spectral(const InverseProblem& problem, const InversionOptions& options) {
  return problem.dec().synthesize(inverse_coefficients(problem, options, "invert_spectral"));
}

Vector invert_bessel(const InverseProblem& problem, double alpha, const QuadratureConfig& config,
                     const InversionOptions& options) {
  require_alpha(alpha, "invert_bessel");
  const SpectralDecomposition& dec = problem.dec();
  const double T = problem.horizon();
  const Vector c = dec.coefficients(problem.data());
  const auto modes = significant_modes(dec, problem.data(), options.energyTol);
  const double lambdaMax = max_lambda(dec, modes);
  if (lambdaMax * T > options.conditioningCap) {
    throw Error(ErrorCode::ConditioningCapExceeded, "invert_bessel",
                "lambda_max T exceeds the conditioning cap",
                {{"exponent", lambdaMax * T}, {"cap", options.conditioningCap}});
  }
  if (modes.empty()) return Vector::Zero(dec.size());

  const Eigen::Index m = Eigen::Index(modes.size());
  Vector rate(m), amp(m);
  double logNorm2 = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double lambda = dec.eigenvalues()[modes[i]];
    rate[i] = 1.0 / (lambda + alpha);
    amp[i] = c[modes[i]] * rate[i];
    const double term = 2.0 * lambda * T + 2.0 * std::log(std::abs(c[modes[i]]));
    logNorm2 = std::max(logNorm2, term) + std::log1p(std::exp(-std::abs(logNorm2 - term)));
  }
  const double logNorm = 0.5 * logNorm2;

  QuadratureConfig cfg = config;
  if (cfg.sMax <= 0.0) {
    for (Eigen::Index i = 0; i < m; ++i) {
      // tail_i = |amp_i| e^{-alpha T} int_s^inf e^{2 sqrt(T u) - rate_i u} du
      const double logTarget = std::log(cfg.tailTol) + logNorm + alpha * T - std::log(std::abs(amp[i]));
      cfg.sMax = std::max(cfg.sMax, growth_decay_truncation(T, rate[i], logTarget, 1.0));
    }
  }
  if (cfg.panels < 64) cfg.panels = 64;

  // I0(z) J^alpha_s g = i0_scaled(z) sum_k amp_k e^{z - rate_k s}, folded with e^{-alpha T}.
  const WeightFn weight = [&](double s) { return bessel_i0_scaled(2.0 * std::sqrt(T * s)); };
  const FieldFn field = [&](double s) -> Vector {
    const double z = 2.0 * std::sqrt(T * s) - alpha * T;
    return (z - rate.array() * s).exp() * amp.array();
  };
  const QuadratureResult q = bochner_quadrature(weight, field, cfg);
  Vector coeffs = Vector::Zero(dec.size());
  for (Eigen::Index i = 0; i < m; ++i) coeffs[modes[i]] = q.value[i];
  return dec.synthesize(coeffs);
}

Vector PicardResult::iterate(const SpectralDecomposition& dec, int n, size_t gridIndex) const {
  return dec.synthesize(coefficients.at(size_t(n)).col(Eigen::Index(gridIndex)));
}

constexpr double kMaxPicardSteps = 200000.0;

PicardResult picard_j_alpha(const SpectralDecomposition& dec, double alpha, const Vector& f, double t,
                            int nIter, int pointsPerUnitTime) {
  require_alpha(alpha, "picard_j_alpha");
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "picard_j_alpha", "t must be positive", {{"t", t}});
  if (nIter < 0 || pointsPerUnitTime < 1) {
    throw Error(ErrorCode::InvalidArgument, "picard_j_alpha", "need nIter >= 0 and a positive grid density");
  }
  const Vector c = dec.coefficients(f);
  const Eigen::Index modes = dec.size();
  // Trapezoid floor is about h^2 t ||f|| / (12 alpha^3); keep it under half the bound at nIter.
  double lastBound = 1.0;
  for (int n = 1; n <= nIter; ++n) lastBound *= t / (alpha * n);
  const double hFloor = std::sqrt(6.0 * lastBound * alpha * alpha * alpha / t);
  const double stepsWanted = std::max(std::ceil(t * pointsPerUnitTime), std::ceil(t / hFloor));
  const auto steps = Eigen::Index(std::min(stepsWanted, kMaxPicardSteps));
  const double h = t / double(steps);

  PicardResult out;
  out.grid.resize(size_t(steps) + 1);
  for (Eigen::Index i = 0; i <= steps; ++i) out.grid[size_t(i)] = h * double(i);

  Vector resolvent(modes);
  for (Eigen::Index k = 0; k < modes; ++k) resolvent[k] = 1.0 / (dec.eigenvalues()[k] + alpha);
  const Vector base = resolvent.cwiseProduct(c);  // U^alpha f

  Matrix exact(modes, steps + 1);
  for (Eigen::Index i = 0; i <= steps; ++i) {
    exact.col(i) = (-resolvent * out.grid[size_t(i)]).array().exp() * base.array();
  }
  const double fnorm = c.norm();

  Matrix current = base.replicate(1, steps + 1);
  double factor = 1.0;  // t^n / (alpha^n n!)
  for (int n = 0; n <= nIter; ++n) {
    if (n > 0) {
      Matrix next(modes, steps + 1);
      Vector integral = Vector::Zero(modes);
      next.col(0) = base;
      for (Eigen::Index i = 1; i <= steps; ++i) {
        integral += 0.5 * h * resolvent.cwiseProduct(current.col(i - 1) + current.col(i));
        next.col(i) = base - integral;
      }
      current = std::move(next);
      factor *= t / (alpha * n);
    }
    out.supErrors.push_back((current - exact).colwise().norm().maxCoeff());
    out.bounds.push_back(factor * fnorm);
    out.coefficients.push_back(current);
  }
  return out;
}

Trajectory cauchy_solve_j(const SpectralDecomposition& dec, double alpha, const Vector& f,
                          const std::vector<double>& tGrid) {
  require_alpha(alpha, "cauchy_solve_j");
  const Vector initial = resolvent_apply(dec, alpha, f);
  Trajectory out;
  for (double t : tGrid) {
    if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "cauchy_solve_j", "times must be non-negative", {{"t", t}});
    // T_t = exp(-t U^alpha) acts on mode k by exp(-t / (lambda_k + alpha)).
    const FunctionOfOperatorSpec flow{
        "exp(-t U^alpha)", [t, alpha](double lambda) { return std::exp(-t / (lambda + alpha)); }, {{"t", t}}};
    out.times.push_back(t);
    out.values.push_back(apply_function(dec, flow, initial));
  }
  return out;
}

LaplacePair laplace_diagnostic(const SpectralDecomposition& dec, double alpha, const Vector& f, double s,
                               const QuadratureConfig& config) {
  require_alpha(alpha, "laplace_diagnostic");
  if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "laplace_diagnostic", "s must be non-negative", {{"s", s}});
  const WeightedStateSpace& space = dec.space();
  LaplacePair out;
  out.rhs = s == 0.0 ? space.inner(f, f) : space.inner(resolvent_apply(dec, alpha + 1.0 / s, f), f) / s;

  const Vector c = dec.coefficients(f);
  const Vector energy = c.cwiseProduct(c);
  Vector rate(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) rate[k] = 1.0 / (dec.eigenvalues()[k] + alpha);
  const double scale = energy.dot(rate);
  if (scale == 0.0) return out;

  QuadratureConfig cfg = config;
  if (cfg.sMax <= 0.0) cfg.sMax = exponential_truncation(scale, s + rate.minCoeff(), cfg.tailTol);
  const WeightFn weight = [s](double t) { return std::exp(-s * t); };
  // (J^alpha_t f, f) = sum_k c_k^2 r_k e^{-t r_k}
  const FieldFn field = [&](double t) -> Vector {
    return Vector::Constant(1, (energy.array() * rate.array() * (-t * rate.array()).exp()).sum());
  };
  out.lhs = bochner_quadrature(weight, field, cfg, TailEnvelope{scale, s + rate.minCoeff()}).value[0];
  return out;
}

namespace {

// Mode coefficients of u(t) = P_{T-t} P_T^{-1} g = sum_k e^{lambda_k t} (phi_k, g) phi_k.
Vector backward_coefficients(const SpectralDecomposition& dec, const Vector& inverse, double horizon, double t) {
  Vector out(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    out[k] = inverse[k] == 0.0 ? 0.0 : std::exp(-dec.eigenvalues()[k] * (horizon - t)) * inverse[k];
  }
  return out;
}

}  // namespace

Trajectory solve_backward_cauchy(const InverseProblem& problem, const std::vector<double>& tGrid,
                                 const InversionOptions& options) {
  const SpectralDecomposition& dec = problem.dec();
  const Vector inverse = inverse_coefficients(problem, options, "solve_backward_cauchy");
  const double T = problem.horizon();
  Trajectory out;
  for (double t : tGrid) {
    if (!(t >= 0.0 && t <= T)) {
      throw Error(ErrorCode::InvalidArgument, "solve_backward_cauchy", "times must lie in [0, T]", {{"t", t}});
    }
    out.times.push_back(t);
    out.values.push_back(dec.synthesize(t == T ? inverse : backward_coefficients(dec, inverse, T, t)));
  }
  return out;
}

double fd_time_step(double horizon, double rate, double pdeTol) {
  double h = horizon / 200.0;
  if (rate > 0.0) h = std::min(h, std::sqrt(0.06 * pdeTol / (rate * rate * rate)));
  return h;
}

double backward_cauchy_residual(const InverseProblem& problem, double t, double pdeTol,
                                const InversionOptions& options) {
  const SpectralDecomposition& dec = problem.dec();
  const double T = problem.horizon();
  const Vector inverse = inverse_coefficients(problem, options, "backward_cauchy_residual");
  double rate = 0.0;
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    if (inverse[k] != 0.0) rate = std::max(rate, dec.eigenvalues()[k]);
  }
  const double h = fd_time_step(T, rate, pdeTol);
  if (!(t - h >= 0.0 && t + h <= T)) {
    throw Error(ErrorCode::InvalidArgument, "backward_cauchy_residual",
                "residual time must be interior to [0, T]", {{"t", t}, {"step", h}});
  }
  const Vector u = dec.synthesize(backward_coefficients(dec, inverse, T, t));
  const Vector ut = dec.synthesize((backward_coefficients(dec, inverse, T, t + h) -
                                    backward_coefficients(dec, inverse, T, t - h)) / (2.0 * h));
  const Vector residual = ut + dec.generator().apply(u);
  return dec.space().norm(residual) / dec.space().norm(u);
}

double h_spectral(const SpectralDecomposition& dec, const Vector& f, double horizon, double t, double x) {
  const Vector c = dec.coefficients(f);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    if (c[k] == 0.0) continue;
    const double beta = 2.0 * (horizon - t) + dec.eigenvalues()[k];
    if (!(beta > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "h_spectral", "2(T - t) + lambda_k must be positive",
                  {{"t", t}, {"lambda", dec.eigenvalues()[k]}});
    }
    sum += c[k] * c[k] * std::exp(-x / beta) / beta;
  }
  return sum;
}

double h_quadrature(const SpectralDecomposition& dec, const Vector& f, double horizon, double t, double x,
                    const QuadratureConfig& config) {
  const Vector c = dec.coefficients(f);
  const Vector energy = c.cwiseProduct(c);
  const double decay = 2.0 * (horizon - t);
  double slowest = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    if (energy[k] > 0.0) slowest = std::min(slowest, decay + dec.eigenvalues()[k]);
  }
  if (!std::isfinite(slowest)) return 0.0;
  if (!(slowest > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "h_quadrature", "2(T - t) + lambda_min must be positive", {{"t", t}});
  }
  QuadratureConfig cfg = config;
  if (cfg.sMax <= 0.0) cfg.sMax = exponential_truncation(energy.sum(), slowest, cfg.tailTol);
  const Vector& lambda = dec.eigenvalues();
  const WeightFn weight = [&](double s) { return bessel_j0(2.0 * std::sqrt(x * s)); };
  // e^{-2(T-t)s} (P_s f, f) = sum_k c_k^2 e^{-(2(T-t) + lambda_k) s}
  const FieldFn field = [&](double s) -> Vector {
    return Vector::Constant(1, (energy.array() * (-(decay + lambda.array()) * s).exp()).sum());
  };
  return bochner_quadrature(weight, field, cfg).value[0];
}

HCheckReport squared_bessel_h_check(const SpectralDecomposition& dec, const Vector& f, double horizon,
                                    const std::vector<double>& tGrid, const std::vector<double>& xGrid,
                                    double step, const QuadratureConfig& config) {
  require_length(dec, f, "squared_bessel_h_check");
  HCheckReport report;
  auto residual = [&](auto&& h, double t, double x) {
    const double ht = (h(t + step, x) - h(t - step, x)) / (2.0 * step);
    const double hc = h(t, x);
    const double hxp = h(t, x + step);
    const double hxm = h(t, x - step);
    const double hxx = (hxp - 2.0 * hc + hxm) / (step * step);
    const double hx = (hxp - hxm) / (2.0 * step);
    return std::abs(ht + 2.0 * x * hxx + 2.0 * hx);
  };
  const auto spectral = [&](double t, double x) { return h_spectral(dec, f, horizon, t, x); };
  const auto quadrature = [&](double t, double x) { return h_quadrature(dec, f, horizon, t, x, config); };
  for (double t : tGrid) {
    if (!(t - step >= 0.0 && t + step < horizon)) {
      throw Error(ErrorCode::InvalidArgument, "squared_bessel_h_check",
                  "t grid must stay inside (step, T - step)", {{"t", t}});
    }
    for (double x : xGrid) {
      if (!(x - step >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "squared_bessel_h_check", "x grid must be >= step", {{"x", x}});
      }
      report.maxResidualSpectral = std::max(report.maxResidualSpectral, residual(spectral, t, x));
      report.maxResidualQuadrature = std::max(report.maxResidualQuadrature, residual(quadrature, t, x));
      report.maxQuadratureDeviation =
          std::max(report.maxQuadratureDeviation, std::abs(spectral(t, x) - quadrature(t, x)));
    }
  }
  for (double x : xGrid) {
    const double initial = dec.space().inner(j_alpha_spectral(dec, 2.0 * horizon, x, f), f);
    report.initialConditionError = std::max(report.initialConditionError, std::abs(initial - spectral(0.0, x)));
  }
  return report;
}

}  // namespace mkinv
