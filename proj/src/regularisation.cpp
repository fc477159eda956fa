#include "mkinv/regularisation.hpp"

#include <cmath>
#include <limits>

#include "mkinv/error.hpp"

namespace mkinv {

namespace {

constexpr double kLogDoubleMax = 709.0;

double param(const std::map<std::string, double>& parameters, const std::string& key, const std::string& name) {
  const auto it = parameters.find(key);
  if (it == parameters.end()) {
    throw Error(ErrorCode::InvalidArgument, "phi::make", "phi '" + name + "' needs parameter '" + key + "'");
  }
  return it->second;
}

void require_length(const SpectralDecomposition& dec, const Vector& f, const char* op) {
  if (f.size() != dec.size()) {
    throw Error(ErrorCode::LengthMismatch, op, "vector length does not match the state space",
                {{"expected", double(dec.size())}, {"actual", double(f.size())}});
  }
}

// log phi(lambda_k) for every mode, with DegeneratePhi on non-positive values.
Vector log_phi(const SpectralDecomposition& dec, const PhiFunction& phi, const char* op) {
  Vector out(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    const double lambda = dec.eigenvalues()[k];
    const double v = phi.value(lambda);
    if (!(v > 0.0)) {
      throw Error(ErrorCode::DegeneratePhi, op, "phi must be positive on the spectrum",
                  {{"lambda", lambda}, {"phi", v}});
    }
    out[k] = std::isinf(v) ? phi.logValue(lambda) : std::log(v);
  }
  return out;
}

// 1 / (gamma e^{L} + (1 - gamma) e^{-lambda T}) without forming e^{L} when it is large.
double multiplier(double gamma, double logPhi, double lambda, double horizon) {
  if (logPhi > 0.0) {
    return std::exp(-logPhi) / (gamma + (1.0 - gamma) * std::exp(-lambda * horizon - logPhi));
  }
  return 1.0 / (gamma * std::exp(logPhi) + (1.0 - gamma) * std::exp(-lambda * horizon));
}

}  // namespace

namespace phi {

PhiFunction tikhonov_exp(double horizon) {
  return {"tikhonov_exp", {{"T", horizon}},
          [horizon](double lambda) { return std::exp(lambda * horizon); },
          [horizon](double lambda) { return lambda * horizon; }};
}

PhiFunction constant(double c) {
  return {"constant", {{"c", c}}, [c](double) { return c; }, [c](double) { return std::log(c); }};
}

PhiFunction jump_mixture(double tStar, double tau) {
  const auto log = [tStar, tau](double lambda) { return tau * std::expm1(-tStar * lambda); };
  return {"jump_mixture", {{"tStar", tStar}, {"tau", tau}}, [log](double lambda) { return std::exp(log(lambda)); }, log};
}

PhiFunction resolvent_mixture(double alpha, double tau) {
  const auto log = [alpha, tau](double lambda) { return -tau * lambda / (lambda + alpha); };
  return {"resolvent_mixture", {{"alpha", alpha}, {"tau", tau}},
          [log](double lambda) { return std::exp(log(lambda)); }, log};
}

PhiFunction make(const std::string& name, const std::map<std::string, double>& parameters) {
  if (name == "tikhonov_exp") return tikhonov_exp(param(parameters, "T", name));
  if (name == "constant") return constant(param(parameters, "c", name));
  if (name == "jump_mixture") return jump_mixture(param(parameters, "tStar", name), param(parameters, "tau", name));
  if (name == "resolvent_mixture") {
    return resolvent_mixture(param(parameters, "alpha", name), param(parameters, "tau", name));
  }
  throw Error(ErrorCode::InvalidArgument, "phi::make", "unknown phi '" + name + "'");
}

}  // namespace phi

void RegularisationConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "RegularisationConfig", "gamma must lie in (0, 1)", {{"gamma", gamma}});
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::InvalidArgument, "RegularisationConfig", "T must be positive", {{"T", horizon}});
  }
  if (!phi.value || !phi.logValue) {
    throw Error(ErrorCode::InvalidArgument, "RegularisationConfig", "phi is not set");
  }
}

Vector regularised_multipliers(const SpectralDecomposition& dec, const RegularisationConfig& config) {
  config.validate();
  const Vector logPhi = log_phi(dec, config.phi, "regularised_solve");
  Vector out(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    out[k] = multiplier(config.gamma, logPhi[k], dec.eigenvalues()[k], config.horizon);
  }
  return out;
}

Vector regularised_solve(const SpectralDecomposition& dec, const RegularisationConfig& config, const Vector& g) {
  require_length(dec, g, "regularised_solve");
  return dec.apply_multipliers(regularised_multipliers(dec, config), g);
}

double regularised_residual(const SpectralDecomposition& dec, const RegularisationConfig& config,
                            const Vector& g, const Vector& f) {
  config.validate();
  require_length(dec, g, "regularised_residual");
  require_length(dec, f, "regularised_residual");
  const Vector logPhi = log_phi(dec, config.phi, "regularised_residual");
  const Vector cg = dec.coefficients(g);
  const Vector cf = dec.coefficients(f);
  Vector r(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    const double lambda = dec.eigenvalues()[k];
    // gamma phi f_k = gamma e^{log phi + log|f_k|} keeps huge phi times tiny f finite.
    double penalty = 0.0;
    if (cf[k] != 0.0) {
      penalty = std::copysign(config.gamma * std::exp(logPhi[k] + std::log(std::abs(cf[k]))), cf[k]);
    }
    r[k] = (1.0 - config.gamma) * std::exp(-lambda * config.horizon) * cf[k] + penalty - cg[k];
  }
  const double gnorm = cg.norm();
  return gnorm == 0.0 ? r.norm() : r.norm() / gnorm;
}

double variational_objective(const SpectralDecomposition& dec, const RegularisationConfig& config,
                             const Vector& g, const Vector& h) {
  config.validate();
  require_length(dec, g, "variational_objective");
  require_length(dec, h, "variational_objective");
  const Vector logPhi = log_phi(dec, config.phi, "variational_objective");
  const Vector cg = dec.coefficients(g);
  const Vector ch = dec.coefficients(h);
  const double weight = config.gamma / (1.0 - config.gamma);
  double fit = 0.0;
  double penalty = 0.0;
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    const double lambda = dec.eigenvalues()[k];
    const double d = std::exp(-lambda * config.horizon) * ch[k] - cg[k];
    fit += d * d;
    penalty += std::exp(logPhi[k] - lambda * config.horizon) * ch[k] * ch[k];
  }
  return fit + weight * penalty;
}

Vector variational_gradient(const SpectralDecomposition& dec, const RegularisationConfig& config,
                            const Vector& g, const Vector& h) {
  config.validate();
  require_length(dec, g, "variational_gradient");
  require_length(dec, h, "variational_gradient");
  const Vector logPhi = log_phi(dec, config.phi, "variational_gradient");
  const Vector cg = dec.coefficients(g);
  const Vector ch = dec.coefficients(h);
  const double weight = config.gamma / (1.0 - config.gamma);
  Vector out(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    const double lambda = dec.eigenvalues()[k];
    const double decay = std::exp(-lambda * config.horizon);
    out[k] = 2.0 * decay * (decay * ch[k] - cg[k]) +
             2.0 * weight * std::exp(logPhi[k] - lambda * config.horizon) * ch[k];
  }
  return dec.synthesize(out);
}

Vector tikhonov_solve(const SpectralDecomposition& dec, double gamma, double horizon, const Vector& g) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tikhonov_solve", "gamma must be positive", {{"gamma", gamma}});
  }
  require_length(dec, g, "tikhonov_solve");
  Vector mult(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    mult[k] = 1.0 / (gamma + std::exp(-dec.eigenvalues()[k] * horizon));
  }
  return dec.apply_multipliers(mult, g);
}

std::vector<GammaStudyRow> gamma_convergence_study(const SpectralDecomposition& dec, const PhiFunction& phi,
                                                   double horizon, const Vector& g,
                                                   const std::vector<double>& gammas,
                                                   const InversionOptions& options) {
  require_length(dec, g, "gamma_convergence_study");
  const Vector c = dec.coefficients(g);
  const auto modes = significant_modes(dec, g, options.energyTol);
  std::vector<bool> kept(size_t(dec.size()), false);
  for (Eigen::Index k : modes) {
    kept[size_t(k)] = true;
    if (dec.eigenvalues()[k] * horizon > kLogDoubleMax) {
      throw Error(ErrorCode::OverflowRisk, "gamma_convergence_study", "e^{lambda_max T} exceeds double range",
                  {{"exponent", dec.eigenvalues()[k] * horizon}});
    }
  }

  std::vector<GammaStudyRow> rows;
  for (double gamma : gammas) {
    RegularisationConfig config{gamma, phi, horizon};
    config.validate();
    const Vector logPhi = log_phi(dec, phi, "gamma_convergence_study");
    double err2 = 0.0;
    Vector fc(dec.size());
    for (Eigen::Index k = 0; k < dec.size(); ++k) {
      const double lambda = dec.eigenvalues()[k];
      const double mult = multiplier(gamma, logPhi[k], lambda, horizon);
      fc[k] = mult * c[k];
      double e;
      if (kept[size_t(k)]) {
        // e^{lambda T} - mult = e^{lambda T} gamma (x - 1) / (gamma x + 1 - gamma), x = phi e^{lambda T}
        const double logX = logPhi[k] + lambda * horizon;
        if (logX > kLogDoubleMax) {
          e = std::exp(lambda * horizon);
        } else {
          const double x = std::exp(logX);
          e = std::exp(lambda * horizon) * gamma * std::expm1(logX) / (gamma * x + 1.0 - gamma);
        }
      } else {
        e = mult;
      }
      err2 += e * e * c[k] * c[k];
    }
    rows.push_back({gamma, std::sqrt(err2), regularised_residual(dec, config, g, dec.synthesize(fc))});
  }
  return rows;
}

MixtureModel::MixtureModel(const SpectralDecomposition& dec, double gamma, double tStar)
    : dec_(&dec), gamma_(gamma), tStar_(tStar) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "MixtureModel", "gamma must lie in (0, 1)", {{"gamma", gamma}});
  }
  if (!(tStar > 0.0) || !std::isfinite(tStar)) {
    throw Error(ErrorCode::InvalidArgument, "MixtureModel", "tStar must be positive", {{"tStar", tStar}});
  }
}

double MixtureModel::multiplier(double lambda, double t) const {
  return (1.0 - gamma_) * std::exp(-lambda * t) + gamma_ * std::exp(t * std::expm1(-tStar_ * lambda));
}

Vector MixtureModel::multipliers(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "mixture_semigroup", "t must be non-negative", {{"t", t}});
  Vector out(dec_->size());
  for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = multiplier(dec_->eigenvalues()[k], t);
  return out;
}

Vector mixture_semigroup(const MixtureModel& model, double t, const Vector& f) {
  require_length(model.dec(), f, "mixture_semigroup");
  return model.dec().apply_multipliers(model.multipliers(t), f);
}

Matrix mixture_matrix(const MixtureModel& model, double t) {
  const SpectralDecomposition& dec = model.dec();
  const Matrix& phi = dec.eigenvectors();
  return phi * model.multipliers(t).asDiagonal() * phi.transpose() * dec.space().weights().asDiagonal();
}

MixtureInverse mixture_invert(const MixtureModel& model, double t, const Vector& g) {
  require_length(model.dec(), g, "mixture_invert");
  const Vector q = model.multipliers(t);
  const Vector inv = q.cwiseInverse();
  MixtureInverse out;
  out.f = model.dec().apply_multipliers(inv, g);
  out.amplification = inv.maxCoeff();
  out.bound = std::exp(t) / model.gamma();
  const WeightedStateSpace& space = model.dec().space();
  const double gnorm = space.norm(g);
  const double r = space.norm(mixture_semigroup(model, t, out.f) - g);
  out.residual = gnorm == 0.0 ? r : r / gnorm;
  return out;
}

double pide_rate(const MixtureModel& model, double lambda) {
  const double w = 1.0 - model.gamma();
  return w * lambda - (1.0 - w) * std::expm1(-model.tStar() * lambda);
}

namespace {

double pide_growth(const MixtureModel& model, const Vector& c) {
  double rate = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (c[k] != 0.0) rate = std::max(rate, pide_rate(model, model.dec().eigenvalues()[k]));
  }
  return rate;
}

// (phi_k, g) with negligible modes zeroed.
Vector kept_coefficients(const MixtureModel& model, const Vector& g, const InversionOptions& options) {
  const Vector c = model.dec().coefficients(g);
  Vector out = Vector::Zero(c.size());
  for (Eigen::Index k : significant_modes(model.dec(), g, options.energyTol)) out[k] = c[k];
  return out;
}

Vector pide_coefficients(const MixtureModel& model, const Vector& c, double t) {
  Vector out(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    out[k] = c[k] == 0.0 ? 0.0 : std::exp(t * pide_rate(model, model.dec().eigenvalues()[k])) * c[k];
  }
  return out;
}

void check_growth(double exponent, const char* op) {
  if (exponent > kLogDoubleMax) {
    throw Error(ErrorCode::OverflowRisk, op, "PIDE growth leaves double range",
                {{"exponent", exponent}, {"log10Growth", exponent / std::log(10.0)}});
  }
}

}  // namespace

PideResult regularised_pide_solve(const MixtureModel& model, const Vector& g, double horizon,
                                  const std::vector<double>& tGrid, const InversionOptions& options) {
  require_length(model.dec(), g, "regularised_pide_solve");
  const Vector c = kept_coefficients(model, g, options);
  PideResult out;
  out.growthExponent = pide_growth(model, c) * horizon;
  check_growth(out.growthExponent, "regularised_pide_solve");
  for (double t : tGrid) {
    if (!(t >= 0.0 && t <= horizon)) {
      throw Error(ErrorCode::InvalidArgument, "regularised_pide_solve", "times must lie in [0, T]", {{"t", t}});
    }
    out.trajectory.times.push_back(t);
    out.trajectory.values.push_back(model.dec().synthesize(pide_coefficients(model, c, t)));
  }
  return out;
}

double regularised_pide_residual(const MixtureModel& model, const Vector& g, double horizon, double t,
                                 double pdeTol, const InversionOptions& options) {
  require_length(model.dec(), g, "regularised_pide_residual");
  const SpectralDecomposition& dec = model.dec();
  const Vector c = kept_coefficients(model, g, options);
  const double rate = pide_growth(model, c);
  check_growth(rate * horizon, "regularised_pide_residual");
  const double h = fd_time_step(horizon, rate, pdeTol);
  if (!(t - h >= 0.0 && t + h <= horizon)) {
    throw Error(ErrorCode::InvalidArgument, "regularised_pide_residual", "residual time must be interior to [0, T]",
                {{"t", t}, {"step", h}});
  }
  const double w = 1.0 - model.gamma();
  const Vector u = dec.synthesize(pide_coefficients(model, c, t));
  const Vector ut =
      dec.synthesize((pide_coefficients(model, c, t + h) - pide_coefficients(model, c, t - h)) / (2.0 * h));
  const Vector jump = semigroup_apply(dec, model.tStar(), u) - u;
  const Vector residual = ut + w * dec.generator().apply(u) + (1.0 - w) * jump;
  return dec.space().norm(residual) / dec.space().norm(u);
}

}  // namespace mkinv
