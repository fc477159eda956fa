#include "mkinv/invariants.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "mkinv/error.hpp"
#include "mkinv/expression.hpp"
#include "mkinv/generator.hpp"
#include "mkinv/inversion.hpp"
#include "mkinv/regularisation.hpp"

namespace mkinv {

namespace {

constexpr double kLogDoubleMax = 709.0;
constexpr double kResidualLogPhiMax = 10.0;
constexpr double kUlpSlack = 1.0 + 8.0 * std::numeric_limits<double>::epsilon();

double relative(const WeightedStateSpace& space, const Vector& a, const Vector& b) {
  const double scale = space.norm(b);
  const double diff = space.norm(a - b);
  return scale == 0.0 ? diff : diff / scale;
}

CheckResult measured(std::string name, double value, double threshold, std::string note = {}) {
  return {std::move(name), value <= threshold ? CheckStatus::Pass : CheckStatus::Fail, value, threshold,
          std::move(note)};
}

CheckResult skipped(std::string name, std::string note) {
  return {std::move(name), CheckStatus::Skip, 0.0, 0.0, std::move(note)};
}

bool is_markov(const Matrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j && a(i, j) < 0.0) return false;
    }
  }
  return (a.rowwise().sum().array() <= 1e-9 * a.cwiseAbs().maxCoeff()).all();
}

std::vector<PhiFunction> registry(double horizon) {
  return {phi::tikhonov_exp(horizon), phi::constant(1.0), phi::jump_mixture(1.0, horizon),
          phi::resolvent_mixture(1.0, 1.0)};
}

}  // namespace

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
  }
  return "skip";
}

std::vector<CheckResult> run_invariant_suite(const SpectralDecomposition& dec, const InvariantOptions& options) {
  const WeightedStateSpace& space = dec.space();
  const double T = options.horizon;
  const double lambdaMax = dec.lambda_max();
  Vector f = parse_function_literal("random", space, nullptr, options.seed);
  f /= space.norm(f);
  const Vector g = semigroup_apply(dec, T, f);
  std::mt19937_64 rng(options.seed + 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto random_vector = [&] {
    Vector v(dec.size());
    for (auto& x : v) x = unit(rng);
    return v;
  };

  std::vector<CheckResult> out;
  const auto attempt = [&](const std::string& name, const std::function<CheckResult()>& body) {
    try {
      out.push_back(body());
    } catch (const Error& e) {
      out.push_back({name, CheckStatus::Fail, 0.0, 0.0, std::string(to_string(e.code())) + ": " + e.what()});
    }
  };

  attempt("m_symmetry", [&] {
    return measured("m_symmetry", check_m_symmetry(dec.generator().matrix(), space), SymmetricGenerator::kDefaultSymTol);
  });
  attempt("orthonormality", [&] { return measured("orthonormality", dec.orthonormality_residual(), 1e-10); });
  attempt("reconstruction", [&] { return measured("reconstruction", dec.reconstruction_residual(f), 1e-8); });
  attempt("semigroup_property", [&] {
    const Vector split = semigroup_apply(dec, 0.3 * T, semigroup_apply(dec, 0.7 * T, f));
    return measured("semigroup_property", relative(space, split, g), 1e-10);
  });
  attempt("positivity", [&] {
    if (!is_markov(dec.generator().matrix())) return skipped("positivity", "generator is not a Markov rate matrix");
    const Vector pos = f.cwiseAbs();
    const Vector image = semigroup_apply(dec, T, pos);
    return measured("positivity", std::max(0.0, -image.minCoeff() / pos.maxCoeff()), 1e-12);
  });
  attempt("j_alpha_oracle", [&] {
    if (lambdaMax > 50.0) return skipped("j_alpha_oracle", "lambda_max > 50");
    double worst = 0.0;
    for (double t : {0.1, 1.0, 5.0}) {
      for (double alpha : {0.5, 2.0}) {
        worst = std::max(worst, relative(space, j_alpha_quadrature(dec, alpha, t, f), j_alpha_spectral(dec, alpha, t, f)));
      }
    }
    return measured("j_alpha_oracle", worst, 1e-6);
  });

  const InverseProblem problem(dec, T, g);
  const ConditioningReport report = membership_criterion(problem, 1.0);
  // Round trips are stated for the exact inverse, so no modes are dropped there.
  InversionOptions exact;
  exact.energyTol = 0.0;
  const ConditioningReport exactReport = membership_criterion(problem, 1.0, {}, exact);
  const bool invertible = exactReport.amplificationLog10 <= 12.0;
  attempt("inversion_round_trip", [&] {
    if (!invertible) return skipped("inversion_round_trip", "amplification above 1e12");
    const Vector inv = invert_spectral(problem, exact);
    return measured("inversion_round_trip", relative(space, semigroup_apply(dec, T, inv), g), 1e-10);
  });
  attempt("bessel_inversion", [&] {
    if (report.lambdaMax * T > 20.0) return skipped("bessel_inversion", "lambda_max T > 20");
    const Vector ref = invert_spectral(problem);
    double worst = 0.0;
    for (double alpha : {0.5, 1.0, 2.0}) worst = std::max(worst, relative(space, invert_bessel(problem, alpha), ref));
    return measured("bessel_inversion", worst, 1e-5);
  });
  attempt("membership_quadrature", [&] {
    if (!report.membershipQuadrature) return skipped("membership_quadrature", "integrand beyond double range");
    const double dev = std::abs(*report.membershipQuadrature - report.membershipSpectral) / report.membershipSpectral;
    return measured("membership_quadrature", dev, 1e-6);
  });
  attempt("picard_bound", [&] {
    const PicardResult picard = picard_j_alpha(dec, 1.0, f, 1.0, 10);
    double worst = 0.0;
    for (size_t n = 0; n < picard.supErrors.size(); ++n) worst = std::max(worst, picard.supErrors[n] / picard.bounds[n]);
    return measured("picard_bound", worst, 1.0, "max ratio of error to bound over n = 0..10");
  });
  attempt("j_alpha_monotone_convex", [&] {
    Vector h = f;
    if (dec.eigenvalues()[0] <= 1e-12 * std::max(1.0, lambdaMax)) h -= space.inner(h, dec.eigenvectors().col(0)) * dec.eigenvectors().col(0);
    std::vector<double> values;
    for (int i = 0; i < 50; ++i) values.push_back(space.inner(j_alpha_spectral(dec, 1.0, 50.0 * i / 49.0, h), h));
    double worst = 0.0;
    for (size_t i = 1; i < values.size(); ++i) worst = std::max(worst, values[i] - values[i - 1]);
    for (size_t i = 2; i < values.size(); ++i) worst = std::max(worst, -(values[i] - 2.0 * values[i - 1] + values[i - 2]));
    return measured("j_alpha_monotone_convex", worst, 1e-10);
  });
  attempt("laplace_diagnostic", [&] {
    double worst = 0.0;
    for (double s : {0.0, 0.5, 1.0, 4.0}) {
      const LaplacePair p = laplace_diagnostic(dec, 1.0, f, s);
      worst = std::max(worst, std::abs(p.lhs - p.rhs));
    }
    return measured("laplace_diagnostic", worst, 1e-8);
  });
  attempt("regularisation_residual", [&] {
    double worst = 0.0;
    std::string note;
    for (const PhiFunction& phi : registry(T)) {
      // Nodal round-off in f is multiplied by phi, so huge phi hides the residual.
      if (phi.logValue(lambdaMax) > kResidualLogPhiMax) {
        note = phi.name + " skipped: phi(lambda_max) above e^10";
        continue;
      }
      const RegularisationConfig config{0.5, phi, T};
      worst = std::max(worst, regularised_residual(dec, config, g, regularised_solve(dec, config, g)));
    }
    return measured("regularisation_residual", worst, 1e-10, note);
  });
  attempt("variational_minimality", [&] {
    double worstGradient = 0.0;
    double worstDecrease = 0.0;
    for (const PhiFunction& phi : registry(T)) {
      if (phi.logValue(lambdaMax) > kResidualLogPhiMax) continue;
      const RegularisationConfig config{0.5, phi, T};
      const Vector best = (1.0 - config.gamma) * regularised_solve(dec, config, g);
      worstGradient = std::max(worstGradient, space.norm(variational_gradient(dec, config, g, best)) / space.norm(g));
      const double base = variational_objective(dec, config, g, best);
      for (int i = 0; i < 100; ++i) {
        Vector v = random_vector();
        v /= space.norm(v);
        for (double eps : {1e-2, 1e-4}) {
          worstDecrease = std::max(worstDecrease, base - variational_objective(dec, config, g, best + eps * v));
        }
      }
    }
    CheckResult r = measured("variational_minimality", worstGradient, 1e-8, "gradient norm / ||g||");
    if (worstDecrease > 0.0) {
      r.status = CheckStatus::Fail;
      r.note = "a perturbation decreased the objective";
    }
    return r;
  });
  attempt("mixture_inverse_norm", [&] {
    double worst = 0.0;
    for (double gamma : {0.01, 0.1, 0.5}) {
      const MixtureModel model(dec, gamma, 1.0);
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const MixtureInverse inv = mixture_invert(model, t, g);
        worst = std::max(worst, inv.amplification / (inv.bound * kUlpSlack));
        if (inv.residual > 1e-10) {
          return CheckResult{"mixture_inverse_norm", CheckStatus::Fail, inv.residual, 1e-10, "residual too large"};
        }
      }
    }
    return measured("mixture_inverse_norm", worst, 1.0, "max amplification / (e^t / gamma)");
  });
  attempt("mixture_sub_markov", [&] {
    if (!is_markov(dec.generator().matrix())) return skipped("mixture_sub_markov", "generator is not a Markov rate matrix");
    const MixtureModel model(dec, 0.1, 1.0);
    const Vector ones = Vector::Ones(dec.size());
    // Excess mass measured in L2(m): nodes of tiny mass carry eigenvector
    // round-off of order eps sqrt(total / m_i) in their nodal values.
    const Vector excess = (mixture_semigroup(model, T, ones) - ones).cwiseMax(0.0);
    return measured("mixture_sub_markov", space.norm(excess) / space.norm(ones), 1e-10);
  });
  attempt("commutativity", [&] {
    const MixtureModel model(dec, 0.1, 1.0);
    const FunctionOfOperatorSpec phi = phi::jump_mixture(1.0, T).spec();
    const Vector a = mixture_semigroup(model, 0.5, semigroup_apply(dec, 0.3, apply_function(dec, phi, f)));
    const Vector b = apply_function(dec, phi, semigroup_apply(dec, 0.3, mixture_semigroup(model, 0.5, f)));
    return measured("commutativity", relative(space, a, b), 1e-10);
  });
  attempt("backward_cauchy", [&] {
    if (!invertible) return skipped("backward_cauchy", "amplification above 1e12");
    const Trajectory u = solve_backward_cauchy(problem, {0.0, T}, exact);
    const double start = relative(space, u.values[0], g);
    const double residual = backward_cauchy_residual(problem, 0.5 * T, 1e-4, exact);
    CheckResult r = measured("backward_cauchy", residual, 1e-4, "relative residual at T/2");
    if (start > 1e-10) {
      r.status = CheckStatus::Fail;
      r.note = "u(0) differs from g";
    }
    return r;
  });
  attempt("regularised_pide", [&] {
    const MixtureModel model(dec, 0.5, 1.0);
    if (pide_rate(model, lambdaMax) * T > kLogDoubleMax) return skipped("regularised_pide", "growth beyond double range");
    return measured("regularised_pide", regularised_pide_residual(model, g, T, 0.5 * T), 1e-4, "relative residual at T/2");
  });
  attempt("gamma_convergence", [&] {
    if (exactReport.lambdaMax * T > 10.0) return skipped("gamma_convergence", "lambda_max T > 10");
    std::vector<double> gammas;
    for (int k = 1; k <= 8; ++k) gammas.push_back(std::pow(10.0, -k));
    const auto rows = gamma_convergence_study(dec, phi::tikhonov_exp(T), T, g, gammas, exact);
    for (size_t i = 1; i < rows.size(); ++i) {
      if (!(rows[i].error < rows[i - 1].error)) {
        return CheckResult{"gamma_convergence", CheckStatus::Fail, rows[i].error, rows[i - 1].error, "not strictly decreasing"};
      }
    }
    return measured("gamma_convergence", rows.back().error / space.norm(invert_spectral(problem, exact)), 1e-6,
                    "final error / ||P_T^{-1} g||");
  });
  return out;
}

}  // namespace mkinv
