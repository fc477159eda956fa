#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "mkinv/laplace.hpp"
#include "mkinv/quadrature.hpp"
#include "mkinv/spectral.hpp"

namespace mkinv {

/// Observed data g = P_T f on a decomposed model. Non-owning view of the
/// decomposition, which must outlive the problem.
class InverseProblem {
 public:
  /// Throws InvalidArgument (T <= 0 or non-finite g) or LengthMismatch.
  InverseProblem(const SpectralDecomposition& dec, double horizon, Vector g);

  const SpectralDecomposition& dec() const noexcept { return *dec_; }
  double horizon() const noexcept { return horizon_; }
  const Vector& data() const noexcept { return g_; }

 private:
  const SpectralDecomposition* dec_;
  double horizon_;
  Vector g_;
};

struct InversionOptions {
  /// A mode is negligible when (phi_k, g)^2 <= energyTol ||g||^2. The default
  /// is the relative resolution of ||g||^2 in double precision.
  double energyTol = std::numeric_limits<double>::epsilon();
  /// invert_bessel refuses lambda_max T above this.
  double conditioningCap = 20.0;
  double warningLog10 = 8.0;
  double severeLog10 = 12.0;
};

enum class WellPosedness { Ok, Warning, Severe };

const char* to_string(WellPosedness flag);

struct ConditioningReport {
  /// Largest eigenvalue carrying non-negligible g-energy.
  double lambdaMax = 0.0;
  /// log10 e^{lambdaMax T}
  double amplificationLog10 = 0.0;
  /// log10 sum_k e^{2T(lambda_k + alpha)} (phi_k, g)^2 over non-negligible modes.
  double membershipSpectralLog10 = -std::numeric_limits<double>::infinity();
  /// The same sum in linear scale; +inf when it leaves double range.
  double membershipSpectral = 0.0;
  /// Truncated int_0^inf I0(2 sqrt(2Ts)) (J^alpha_s g, g) ds. Empty when the
  /// integrand is beyond double range.
  std::optional<double> membershipQuadrature;
  WellPosedness flag = WellPosedness::Ok;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> values;
};

/// Indices of modes whose energy in g is not negligible.
std::vector<Eigen::Index> significant_modes(const SpectralDecomposition& dec, const Vector& g,
                                            double energyTol);

/// sum_k (lambda_k + alpha)^{-1} e^{-t/(lambda_k + alpha)} (phi_k, f) phi_k
Vector j_alpha_spectral(const SpectralDecomposition& dec, double alpha, double t, const Vector& f);

/// int_0^inf J0(2 sqrt(t s)) e^{-alpha s} P_s f ds by composite quadrature.
/// sMax defaults to ln(||f|| / (alpha tailTol)) / alpha.
Vector j_alpha_quadrature(const SpectralDecomposition& dec, double alpha, double t, const Vector& f,
                          const QuadratureConfig& config = {});

ConditioningReport membership_criterion(const InverseProblem& problem, double alpha,
                                        const QuadratureConfig& config = {},
                                        const InversionOptions& options = {});

/// int_0^sMax I0(2 sqrt(2Ts)) (J^alpha_s g, g) ds for an explicit sMax.
double membership_quadrature(const InverseProblem& problem, double alpha, double sMax,
                             const QuadratureConfig& config = {}, const InversionOptions& options = {});

/// sum_k e^{lambda_k T} (phi_k, g) phi_k over non-negligible modes.
/// Throws OverflowRisk when lambda_max T leaves double range.
Vector invert_spectral(const InverseProblem& problem, const InversionOptions& options = {});

/// e^{-alpha T} int_0^inf I0(2 sqrt(T s)) J^alpha_s g ds.
/// Throws ConditioningCapExceeded, QuadratureNotConverged.
Vector invert_bessel(const InverseProblem& problem, double alpha, const QuadratureConfig& config = {},
                     const InversionOptions& options = {});

struct PicardResult {
  std::vector<double> grid;
  /// coefficients[n](k, i): mode-k coefficient of j_n(grid[i]).
  std::vector<Matrix> coefficients;
  /// sup_i ||j_n(grid[i]) - J^alpha_{grid[i]} f|| for each n.
  std::vector<double> supErrors;
  /// t^n / (alpha^n n!) ||f||
  std::vector<double> bounds;

  Vector iterate(const SpectralDecomposition& dec, int n, size_t gridIndex) const;
};

/// j_0 = U^alpha f, j_{n+1}(s) = U^alpha f - int_0^s U^alpha j_n(r) dr with the
/// trapezoid rule on a uniform grid of at least `pointsPerUnitTime` points per
/// unit time, refined (up to 2e5 steps) until the quadrature error estimate is
/// below half of t^n / (alpha^n n!) ||f|| at n = nIter.
PicardResult picard_j_alpha(const SpectralDecomposition& dec, double alpha, const Vector& f, double t,
                            int nIter, int pointsPerUnitTime = 1000);

/// j(t) = exp(-t U^alpha) U^alpha f at each time of tGrid.
Trajectory cauchy_solve_j(const SpectralDecomposition& dec, double alpha, const Vector& f,
                          const std::vector<double>& tGrid);

/// int_0^inf e^{-st} (J^alpha_t f, f) dt  vs  (1/s) (U^{alpha + 1/s} f, f), or (f, f) at s = 0.
LaplacePair laplace_diagnostic(const SpectralDecomposition& dec, double alpha, const Vector& f, double s,
                               const QuadratureConfig& config = {});

/// u(t) = P_{T-t} P_T^{-1} g for t in tGrid (all within [0, T]).
Trajectory solve_backward_cauchy(const InverseProblem& problem, const std::vector<double>& tGrid,
                                 const InversionOptions& options = {});

/// Central-difference step for trajectories growing like e^{rate t}: T/200,
/// reduced until the truncation error rate^3 h^2 / 6 is 1% of pdeTol.
double fd_time_step(double horizon, double rate, double pdeTol);

/// ||u_t + A u|| / ||u|| at interior time t with A the generator matrix.
double backward_cauchy_residual(const InverseProblem& problem, double t, double pdeTol = 1e-4,
                                const InversionOptions& options = {});

struct HCheckReport {
  double maxResidualSpectral = 0.0;
  double maxResidualQuadrature = 0.0;
  double maxQuadratureDeviation = 0.0;
  double initialConditionError = 0.0;
};

/// h(t, x) = sum_k (phi_k, f)^2 e^{-x/beta_k} / beta_k, beta_k = 2(T - t) + lambda_k.
double h_spectral(const SpectralDecomposition& dec, const Vector& f, double horizon, double t, double x);

/// h(t, x) = int_0^inf J0(2 sqrt(x s)) e^{-2(T-t)s} (P_s f, f) ds by quadrature.
double h_quadrature(const SpectralDecomposition& dec, const Vector& f, double horizon, double t, double x,
                    const QuadratureConfig& config = {});

/// Residual of h_t + 2x h_xx + 2h_x = 0 by central differences of step
/// `step` in t and x, for both evaluations of h; plus the initial condition
/// h(0, x) = (J^{2T}_x f, f).
HCheckReport squared_bessel_h_check(const SpectralDecomposition& dec, const Vector& f, double horizon,
                                    const std::vector<double>& tGrid, const std::vector<double>& xGrid,
                                    double step = 1e-3, const QuadratureConfig& config = {});

}  // namespace mkinv
