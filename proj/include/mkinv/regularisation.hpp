#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mkinv/inversion.hpp"
#include "mkinv/spectral.hpp"

namespace mkinv {

/// A positive function of the spectral parameter, carried with its logarithm
/// so that products like e^{-lambda T} phi(lambda) stay finite.
struct PhiFunction {
  std::string name;
  std::map<std::string, double> parameters;
  std::function<double(double)> value;
  std::function<double(double)> logValue;

  FunctionOfOperatorSpec spec() const { return {name, value, parameters}; }
};

namespace phi {
/// e^{lambda T}
PhiFunction tikhonov_exp(double horizon);
PhiFunction constant(double c);
/// exp(tau (e^{-tStar lambda} - 1))
PhiFunction jump_mixture(double tStar, double tau);
/// exp(tau (alpha / (lambda + alpha) - 1))
PhiFunction resolvent_mixture(double alpha, double tau);

/// Looks up a registry entry by name. Parameters used: T (tikhonov_exp),
/// c (constant), tStar and tau (jump_mixture), alpha and tau (resolvent_mixture).
/// Throws InvalidArgument for unknown names or missing parameters.
PhiFunction make(const std::string& name, const std::map<std::string, double>& parameters);
}  // namespace phi

struct RegularisationConfig {
  double gamma = 0.5;
  PhiFunction phi;
  double horizon = 1.0;

  /// Throws InvalidArgument unless 0 < gamma < 1 and T > 0.
  void validate() const;
};

/// 1 / (gamma phi(lambda_k) + (1 - gamma) e^{-lambda_k T}) per mode.
/// Throws DegeneratePhi when some phi(lambda_k) <= 0 or is NaN.
Vector regularised_multipliers(const SpectralDecomposition& dec, const RegularisationConfig& config);

Vector regularised_solve(const SpectralDecomposition& dec, const RegularisationConfig& config, const Vector& g);

/// ||(1 - gamma) P_T f + gamma phi(-A) f - g|| / ||g||, evaluated mode by mode.
double regularised_residual(const SpectralDecomposition& dec, const RegularisationConfig& config,
                            const Vector& g, const Vector& f);

/// ||P_T h - g||^2 + gamma / (1 - gamma) (P_T phi(-A) h, h)
double variational_objective(const SpectralDecomposition& dec, const RegularisationConfig& config,
                             const Vector& g, const Vector& h);

/// 2 P_T (P_T h - g) + 2 gamma / (1 - gamma) P_T phi(-A) h
Vector variational_gradient(const SpectralDecomposition& dec, const RegularisationConfig& config,
                            const Vector& g, const Vector& h);

/// Solves P_T f + gamma f = g. Throws InvalidArgument when gamma <= 0.
Vector tikhonov_solve(const SpectralDecomposition& dec, double gamma, double horizon, const Vector& g);

struct GammaStudyRow {
  double gamma = 0.0;
  double error = 0.0;     // ||f_gamma - P_T^{-1} g||
  double residual = 0.0;  // regularised_residual of f_gamma
};

/// Errors against invert_spectral(g) along gammas. Throws OverflowRisk when
/// P_T^{-1} g is out of double range.
std::vector<GammaStudyRow> gamma_convergence_study(const SpectralDecomposition& dec, const PhiFunction& phi,
                                                   double horizon, const Vector& g,
                                                   const std::vector<double>& gammas,
                                                   const InversionOptions& options = {});

/// Q_t = (1 - gamma) P_t + gamma exp(t (P_{tStar} - I)) on a decomposed model.
/// Non-owning; the decomposition must outlive it.
class MixtureModel {
 public:
  /// Throws InvalidArgument unless 0 < gamma < 1 and tStar > 0.
  MixtureModel(const SpectralDecomposition& dec, double gamma, double tStar);

  const SpectralDecomposition& dec() const noexcept { return *dec_; }
  double gamma() const noexcept { return gamma_; }
  double tStar() const noexcept { return tStar_; }

  /// (1 - gamma) e^{-lambda t} + gamma exp(t (e^{-tStar lambda} - 1))
  double multiplier(double lambda, double t) const;
  Vector multipliers(double t) const;

 private:
  const SpectralDecomposition* dec_;
  double gamma_;
  double tStar_;
};

/// Q_t f. Throws NegativeTime.
Vector mixture_semigroup(const MixtureModel& model, double t, const Vector& f);

/// Dense matrix of Q_t acting on nodal values.
Matrix mixture_matrix(const MixtureModel& model, double t);

struct MixtureInverse {
  Vector f;
  /// max_k 1 / q_t(lambda_k)
  double amplification = 0.0;
  /// e^t / gamma
  double bound = 0.0;
  /// ||Q_t f - g|| / ||g||
  double residual = 0.0;
};

MixtureInverse mixture_invert(const MixtureModel& model, double t, const Vector& g);

/// Per-mode growth rate of the regularised backward equation,
/// w lambda + (1 - w)(1 - e^{-tStar lambda}) with w = 1 - gamma.
double pide_rate(const MixtureModel& model, double lambda);

struct PideResult {
  Trajectory trajectory;
  /// max_k rate_k T over modes present in g
  double growthExponent = 0.0;
};

/// u(t) = sum_k e^{t rate_k} (phi_k, g) phi_k over the modes kept by
/// options.energyTol. Throws OverflowRisk when growthExponent leaves double
/// range, and InvalidArgument for times outside [0, T].
PideResult regularised_pide_solve(const MixtureModel& model, const Vector& g, double horizon,
                                  const std::vector<double>& tGrid, const InversionOptions& options = {});

/// ||u_t + w A u + (1 - w)(P_{tStar} u - u)|| / ||u|| at an interior time,
/// with u_t by central differences of step fd_time_step(T, rate_max, pdeTol).
double regularised_pide_residual(const MixtureModel& model, const Vector& g, double horizon, double t,
                                 double pdeTol = 1e-4, const InversionOptions& options = {});

}  // namespace mkinv
