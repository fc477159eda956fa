// Acceptance suite: one [PASS]/[FAIL] line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mkinv/bessel.hpp"
#include "mkinv/error.hpp"
#include "mkinv/expression.hpp"
#include "mkinv/inversion.hpp"
#include "mkinv/laplace.hpp"
#include "mkinv/models.hpp"
#include "mkinv/regularisation.hpp"

using namespace mkinv;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] AC%d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double rel(const WeightedStateSpace& s, const Vector& a, const Vector& b) { return s.norm(a - b) / s.norm(b); }

Vector random_vector(const SpectralDecomposition& dec, std::uint64_t seed) {
  return parse_function_literal("random", dec.space(), nullptr, seed);
}

// The models the criteria run on; T = 1 throughout.
struct Bundled {
  std::string name;
  SpectralDecomposition dec;
};

std::vector<Bundled> decompose_all() {
  std::vector<Bundled> out;
  for (const auto& name : bundled_model_names()) out.push_back({name, spectral_decompose(bundled_model(name))});
  return out;
}

Big j0_series(Big x) {
  const Big y = x * x / 4;
  Big term = 1, sum = 1;
  for (int k = 1; k < 500; ++k) {
    term *= -y / (k * k);
    sum += term;
    if (abs(term) < Big("1e-45")) break;
  }
  return sum;
}

Big i0_series(Big x) {
  const Big y = x * x / 4;
  Big term = 1, sum = 1;
  for (int k = 1; k < 4000; ++k) {
    term *= y / (k * k);
    sum += term;
    if (term < Big("1e-45") * sum) break;
  }
  return sum;
}

}  // namespace

int main() {
  const std::vector<Bundled> models = decompose_all();
  const auto find = [&](const std::string& name) -> const SpectralDecomposition& {
    for (const auto& m : models) {
      if (m.name == name) return m.dec;
    }
    throw Error(ErrorCode::InvalidConfig, "acceptance", "missing model " + name);
  };
  const double T = 1.0;

  report(1, "OU witness", [&] {
    const SpectralDecomposition& dec = find("ou400");
    const OuWitness w = ou_witness_pair(1.0);
    const Vector g = evaluate_on_grid(dec.space(), w.g);
    const Vector exact = evaluate_on_grid(dec.space(), w.f);
    const Vector f = invert_spectral(InverseProblem(dec, T, g));
    const Vector& x = dec.space().points();
    const Vector& m = dec.space().weights();
    double num = 0.0, den = 0.0, nearZero = INFINITY;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) <= 3.0) {
        num += m[i] * (f[i] - exact[i]) * (f[i] - exact[i]);
        den += m[i] * exact[i] * exact[i];
      }
      if (std::abs(x[i]) <= 0.5) nearZero = std::min(nearZero, f[i]);
    }
    const double err = std::sqrt(num / den);
    return Outcome{err <= 1e-2 && nearZero <= -3.0, fmt("interior rel L2(m) error %.3e, min f near 0 = %.6f", err, nearZero)};
  });

  report(2, "Bessel inversion", [&] {
    bool ok = true;
    std::string detail;
    int covered = 0;
    for (const auto& m : models) {
      const Vector g = random_vector(m.dec, 11);
      std::vector<std::pair<std::string, Vector>> cases{{m.name + "/random", g}};
      if (m.name == "ou400") cases.push_back({"ou400/x^2", evaluate_on_grid(m.dec.space(), ou_witness_pair(1.0).g)});
      for (const auto& [label, data] : cases) {
        const InverseProblem problem(m.dec, T, data);
        const ConditioningReport r = membership_criterion(problem, 1.0);
        if (r.lambdaMax * T > 20.0) continue;
        ++covered;
        const Vector ref = invert_spectral(problem);
        std::vector<Vector> results;
        double worst = 0.0, spread = 0.0;
        for (double alpha : {0.5, 1.0, 2.0}) {
          results.push_back(invert_bessel(problem, alpha));
          worst = std::max(worst, rel(m.dec.space(), results.back(), ref));
        }
        for (size_t a = 0; a < results.size(); ++a) {
          for (size_t b = a + 1; b < results.size(); ++b) spread = std::max(spread, rel(m.dec.space(), results[a], results[b]));
        }
        ok = ok && worst <= 1e-5 && spread <= 2e-5;
        detail += label + fmt(" dev %.1e spread %.1e; ", worst, spread);
      }
    }
    return Outcome{ok && covered > 0, detail + std::to_string(covered) + " cases with lambda_max T <= 20"};
  });

  report(3, "J-alpha oracle equivalence", [&] {
    double worst = 0.0;
    std::string names;
    for (const auto& m : models) {
      const Vector f = random_vector(m.dec, 3);
      for (double t : {0.1, 1.0, 5.0}) {
        for (double alpha : {0.5, 2.0}) {
          worst = std::max(worst, rel(m.dec.space(), j_alpha_quadrature(m.dec, alpha, t, f), j_alpha_spectral(m.dec, alpha, t, f)));
        }
      }
      names += m.name + " ";
    }
    return Outcome{worst <= 1e-6, fmt("max rel deviation %.3e over ", worst) + names};
  });

  report(4, "Picard bound", [&] {
    bool ok = true;
    double worstRatio = 0.0, at8 = 0.0;
    for (const char* name : {"chain2", "chain3", "jump_gauss", "laplace50"}) {
      const SpectralDecomposition& dec = find(name);
      Vector f = random_vector(dec, 5);
      for (const auto& [alpha, t] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 1.0}, {1.0, 2.0}}) {
        const PicardResult p = picard_j_alpha(dec, alpha, f, t, 10);
        for (size_t n = 0; n <= 10; ++n) {
          worstRatio = std::max(worstRatio, p.supErrors[n] / p.bounds[n]);
          ok = ok && p.supErrors[n] <= p.bounds[n];
        }
        if (alpha == 1.0 && t == 1.0) {
          const double e8 = p.supErrors[8] / dec.space().norm(f);
          at8 = std::max(at8, e8);
          ok = ok && e8 <= 2.5e-5;
        }
      }
    }
    return Outcome{ok, fmt("max error/bound %.3f, n=8 error/||f|| %.3e", worstRatio, at8)};
  });

  report(5, "Laplace identity", [&] {
    double worst = 0.0;
    const SpectralDecomposition& chain = find("chain2");
    Vector e0(2);
    e0 << 1.0, 0.0;
    const double oracle = laplace_diagnostic(chain, 1.0, e0, 1.0).rhs;
    for (const auto& [dec, f] : std::vector<std::pair<const SpectralDecomposition*, Vector>>{
             {&chain, e0}, {&chain, random_vector(chain, 7)}, {&find("laplace50"), random_vector(find("laplace50"), 7)}}) {
      for (double s : {0.0, 0.5, 1.0, 4.0}) {
        const LaplacePair p = laplace_diagnostic(*dec, 1.0, f, s);
        worst = std::max(worst, std::abs(p.lhs - p.rhs));
      }
    }
    const double closed = std::abs(oracle - 5.0 / 12.0);
    return Outcome{worst <= 1e-8 && closed <= 1e-12, fmt("max |lhs - rhs| %.3e, chain2 s=1 rhs - 5/12 = %.1e", worst, closed)};
  });

  report(6, "Monotone-convex decay", [&] {
    bool ok = true;
    double firstDiff = -INFINITY, secondDiff = INFINITY, ratio = 0.0;
    for (const char* name : {"chain2", "chain3", "jump_gauss"}) {
      const SpectralDecomposition& dec = find(name);
      Vector f = random_vector(dec, 13);
      const Vector phi0 = dec.eigenvectors().col(0);
      f -= dec.space().inner(f, phi0) * phi0;
      std::vector<double> v;
      for (int i = 0; i < 50; ++i) v.push_back(dec.space().inner(j_alpha_spectral(dec, 1.0, 50.0 * i / 49.0, f), f));
      for (size_t i = 1; i < v.size(); ++i) firstDiff = std::max(firstDiff, v[i] - v[i - 1]);
      for (size_t i = 2; i < v.size(); ++i) secondDiff = std::min(secondDiff, v[i] - 2.0 * v[i - 1] + v[i - 2]);
      ratio = std::max(ratio, v.back() / v.front());
    }
    ok = firstDiff <= 1e-10 && secondDiff >= -1e-10 && ratio <= 1e-3;
    return Outcome{ok, fmt("max first diff %.2e, min second diff %.2e, J_50/J_0 %.2e (chain2, chain3, jump_gauss)",
                           firstDiff, secondDiff, ratio)};
  });

  report(7, "Regularisation residual and minimality", [&] {
    double residual = 0.0, gradient = 0.0, decrease = 0.0;
    int cases = 0;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (const char* name : {"chain2", "chain3", "jump_gauss"}) {
      const SpectralDecomposition& dec = find(name);
      const Vector g = random_vector(dec, 19);
      for (const PhiFunction& phi : {phi::tikhonov_exp(T), phi::constant(1.0), phi::constant(0.25),
                                     phi::jump_mixture(1.0, T), phi::resolvent_mixture(1.0, 1.0)}) {
        for (double gamma : {0.1, 0.5, 0.9}) {
          const RegularisationConfig config{gamma, phi, T};
          const Vector f = regularised_solve(dec, config, g);
          residual = std::max(residual, regularised_residual(dec, config, g, f));
          const Vector best = (1.0 - gamma) * f;
          gradient = std::max(gradient, dec.space().norm(variational_gradient(dec, config, g, best)) / dec.space().norm(g));
          const double base = variational_objective(dec, config, g, best);
          for (int i = 0; i < 100; ++i) {
            Vector v(dec.size());
            for (auto& x : v) x = unit(rng);
            v /= dec.space().norm(v);
            for (double eps : {1e-2, 1e-4}) decrease = std::max(decrease, base - variational_objective(dec, config, g, best + eps * v));
          }
          ++cases;
        }
      }
    }
    const bool ok = residual <= 1e-10 && gradient <= 1e-8 && decrease <= 0.0;
    return Outcome{ok, fmt("max residual %.2e, max gradient/||g|| %.2e, max objective decrease %.1e", residual, gradient, decrease) +
                           ", " + std::to_string(cases) + " (model, phi, gamma) cases"};
  });

  report(8, "Gamma to zero convergence", [&] {
    bool ok = true;
    double worstFinal = 0.0;
    std::string names;
    std::vector<double> gammas;
    for (int k = 1; k <= 8; ++k) gammas.push_back(std::pow(10.0, -k));
    InversionOptions exact;
    exact.energyTol = 0.0;
    for (const auto& m : models) {
      const Vector g = random_vector(m.dec, 23);
      const InverseProblem problem(m.dec, T, g);
      if (membership_criterion(problem, 1.0, {}, exact).lambdaMax * T > 10.0) continue;
      const auto rows = gamma_convergence_study(m.dec, phi::tikhonov_exp(T), T, g, gammas, exact);
      for (size_t i = 1; i < rows.size(); ++i) ok = ok && rows[i].error < rows[i - 1].error;
      const double final = rows.back().error / m.dec.space().norm(invert_spectral(problem, exact));
      worstFinal = std::max(worstFinal, final);
      ok = ok && final <= 1e-6;
      names += m.name + " ";
    }
    return Outcome{ok && !names.empty(), fmt("strictly decreasing, max final rel error %.3e on ", worstFinal) + names};
  });

  report(9, "Mixture well-posedness", [&] {
    const SpectralDecomposition& dec = find("laplace400");
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    bool overflowed = true, ok = true;
    double worstResidual = 0.0, worstRatio = 0.0;
    std::vector<MixtureModel> mixtures;
    for (double gamma : {0.01, 0.1, 0.5}) mixtures.emplace_back(dec, gamma, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      Vector g(dec.size());
      for (auto& x : g) x = unit(rng);
      if (trial < 10) {
        try {
          invert_spectral(InverseProblem(dec, 1.0, g));
          overflowed = false;
        } catch (const Error& e) {
          overflowed = overflowed && e.code() == ErrorCode::OverflowRisk;
        }
      }
      for (const MixtureModel& mix : mixtures) {
        for (double t : {0.5, 1.0, 2.0}) {
          const MixtureInverse inv = mixture_invert(mix, t, g);
          worstResidual = std::max(worstResidual, inv.residual);
          worstRatio = std::max(worstRatio, inv.amplification / inv.bound);
          ok = ok && inv.f.allFinite() && inv.residual <= 1e-10 &&
               inv.amplification <= inv.bound * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
        }
      }
    }
    return Outcome{ok && overflowed, std::string("invert_spectral overflows: ") + (overflowed ? "yes" : "no") +
                                         fmt("; max residual %.2e, max amplification/(e^t/gamma) %.16f", worstResidual, worstRatio)};
  });

  report(10, "Backward PDE and PIDE residuals", [&] {
    double worstPde = 0.0, worstPide = 0.0, start = 0.0;
    const SpectralDecomposition& chain = find("chain2");
    const SpectralDecomposition& ou = find("ou400");
    Vector gChain(2);
    gChain << 0.6839397, 0.3160603;
    const std::vector<std::pair<const SpectralDecomposition*, Vector>> cases{
        {&chain, gChain}, {&chain, random_vector(chain, 31)}, {&ou, evaluate_on_grid(ou.space(), ou_witness_pair(1.0).g)}};
    for (const auto& [dec, g] : cases) {
      const InverseProblem problem(*dec, T, g);
      if (membership_criterion(problem, 1.0).lambdaMax * T > 10.0) continue;
      const Trajectory u = solve_backward_cauchy(problem, {0.0, T});
      if (dec == &chain) start = std::max(start, rel(dec->space(), u.values[0], g));
      for (double t : {0.25, 0.5, 0.75}) {
        worstPde = std::max(worstPde, backward_cauchy_residual(problem, t));
        for (double gamma : {0.1, 0.5}) {
          const MixtureModel mix(*dec, gamma, 1.0);
          worstPide = std::max(worstPide, regularised_pide_residual(mix, g, T, t));
        }
      }
    }
    const bool ok = worstPde <= 1e-4 && worstPide <= 1e-4 && start <= 1e-10;
    return Outcome{ok, fmt("max ||u_t + Au||/||u|| %.2e, max PIDE residual %.2e, chain2 ||u(0) - g|| %.1e", worstPde, worstPide, start)};
  });

  report(11, "Squared-Bessel h-function", [&] {
    double residual = 0.0, closed = 0.0, initial = 0.0;
    for (const char* name : {"chain2", "chain3"}) {
      const SpectralDecomposition& dec = find(name);
      const HCheckReport r = squared_bessel_h_check(dec, random_vector(dec, 37), T, {0.2, 0.5, 0.8}, {0.5, 1.0, 2.0, 4.0});
      residual = std::max({residual, r.maxResidualSpectral, r.maxResidualQuadrature});
      initial = std::max(initial, r.initialConditionError);
      for (Eigen::Index k = 0; k < dec.size(); ++k) {
        const Vector f = dec.eigenvectors().col(k);
        for (double t : {0.0, 0.5}) {
          const double beta = 2.0 * (T - t) + dec.eigenvalues()[k];
          for (double x : {0.0, 0.5, 2.0}) {
            const double exact = std::exp(-x / beta) / beta;
            closed = std::max({closed, std::abs(h_spectral(dec, f, T, t, x) - exact),
                               std::abs(h_quadrature(dec, f, T, t, x) - exact)});
          }
        }
      }
    }
    const bool ok = residual <= 1e-4 && closed <= 1e-8 && initial <= 1e-8;
    return Outcome{ok, fmt("max PDE residual %.2e, single-mode closed form error %.2e, h(0, x) error %.1e", residual, closed, initial)};
  });

  report(12, "Special functions", [&] {
    double laplaceErr = 0.0;
    for (double t : {0.5, 1.0, 3.0}) {
      for (double alpha : {0.5, 1.0, 2.0}) {
        const LaplacePair p = laplace_j0_identity(t, alpha);
        laplaceErr = std::max(laplaceErr, std::abs(p.lhs - p.rhs));
      }
      for (double beta : {0.5, 1.0, 2.0}) {
        const LaplacePair p = laplace_i0_identity(t, beta);
        laplaceErr = std::max(laplaceErr, std::abs(p.lhs - p.rhs) / p.rhs);
      }
    }
    const double h = std::ldexp(1.0, -13);
    double ode = 0.0;
    for (double x = 0.5; x <= 10.0; x += 0.05) {
      const double jm = bessel_j0(x - h), j = bessel_j0(x), jp = bessel_j0(x + h);
      ode = std::max(ode, std::abs(x * x * (jp - 2.0 * j + jm) / (h * h) + x * (jp - jm) / (2.0 * h) + x * x * j));
    }
    double j0Err = 0.0, i0Err = 0.0;
    for (double x : {0.0, 0.25, 1.0, 2.404825557695773, 5.0, 10.0, 15.0, 16.5, 20.0, 30.0, 40.0}) {
      j0Err = std::max(j0Err, std::abs(bessel_j0(x) - double(j0_series(Big(x)))));
    }
    for (double x : {0.0, 0.25, 1.0, 5.0, 10.0, 15.0, 20.0, 50.0, 200.0, 700.0}) {
      i0Err = std::max(i0Err, std::abs(bessel_i0(x) / double(i0_series(Big(x))) - 1.0));
    }
    const bool ok = laplaceErr <= 1e-8 && ode <= 1e-6 && j0Err <= 1e-12 && i0Err <= 1e-12;
    return Outcome{ok, fmt("Laplace identities %.2e, J0 ODE residual %.2e, ", laplaceErr, ode) +
                           fmt("J0 abs error %.2e, I0 rel error %.2e vs 50-digit series", j0Err, i0Err)};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
