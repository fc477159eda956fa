#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "mkinv/error.hpp"
#include "mkinv/expression.hpp"
#include "mkinv/models.hpp"
#include "mkinv/regularisation.hpp"

using namespace mkinv;

namespace {
const SpectralDecomposition& chain2() {
  static const SpectralDecomposition dec = spectral_decompose(bundled_model("chain2"));
  return dec;
}
}  // namespace

TEST_SUITE("regularisation") {
  TEST_CASE("two-state Tikhonov-exponential solution") {
    const RegularisationConfig config{0.5, phi::tikhonov_exp(1.0), 1.0};
    Vector g(2);
    g << 1, 0;
    const Vector f = regularised_solve(chain2(), config, g);
    CHECK(f[0] == doctest::Approx(0.5 + 0.5 / std::cosh(1.0)).epsilon(1e-14));
    CHECK(std::abs(f[0] - 0.8240276) < 1e-6);
    CHECK(std::abs(f[1] - 0.1759724) < 1e-6);
    CHECK(regularised_residual(chain2(), config, g, f) < 1e-14);

    const Vector grad = variational_gradient(chain2(), config, g, (1 - config.gamma) * f);
    CHECK(grad.norm() < 1e-14);
    const double best = variational_objective(chain2(), config, g, (1 - config.gamma) * f);
    Vector nudged = (1 - config.gamma) * f;
    nudged[1] += 1e-3;
    CHECK(variational_objective(chain2(), config, g, nudged) > best);
  }

  TEST_CASE("phi registry") {
    CHECK(phi::tikhonov_exp(2.0).value(1.5) == doctest::Approx(std::exp(3.0)));
    CHECK(phi::tikhonov_exp(2.0).logValue(1e4) == doctest::Approx(2e4));
    CHECK(phi::constant(3.0).value(7.0) == 3.0);
    CHECK(phi::jump_mixture(1.0, 2.0).value(1.0) == doctest::Approx(std::exp(2.0 * (std::exp(-1.0) - 1))));
    CHECK(phi::resolvent_mixture(1.0, 1.0).value(1.0) == doctest::Approx(std::exp(-0.5)));
    CHECK(phi::make("constant", {{"c", 2.0}}).value(0.0) == 2.0);
    CHECK_THROWS_AS(phi::make("nope", {}), Error);
    CHECK_THROWS_AS(phi::make("constant", {}), Error);

    RegularisationConfig bad{0.5, phi::constant(-1.0), 1.0};
    CHECK_THROWS_AS(regularised_multipliers(chain2(), bad), Error);
    bad = {1.5, phi::constant(1.0), 1.0};
    CHECK_THROWS_AS(bad.validate(), Error);
  }

  TEST_CASE("plain Tikhonov solves P_T f + gamma f = g") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("chain3"));
    const Vector g = parse_function_literal("random(3)", dec.space());
    const Vector f = tikhonov_solve(dec, 0.1, 1.0, g);
    CHECK((semigroup_apply(dec, 1.0, f) + 0.1 * f - g).norm() < 1e-14);
    CHECK_THROWS_AS(tikhonov_solve(dec, 0.0, 1.0, g), Error);
  }

  TEST_CASE("gamma study shrinks the error") {
    const Vector g = parse_function_literal("random(5)", chain2().space());
    const auto rows = gamma_convergence_study(chain2(), phi::tikhonov_exp(1.0), 1.0, g, {1e-1, 1e-3, 1e-6});
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].error < rows[0].error);
    CHECK(rows[2].error < rows[1].error);
  }

  TEST_CASE("mixture multiplier and matrix") {
    const MixtureModel model(chain2(), 0.1, 1.0);
    CHECK(model.multiplier(1.0, 1.0) == doctest::Approx(0.3842378).epsilon(1e-7));
    CHECK(model.multiplier(0.0, 3.0) == doctest::Approx(1.0));

    const SpectralDecomposition dec = spectral_decompose(bundled_model("chain3"));
    const MixtureModel mix(dec, 0.3, 0.7);
    const Matrix a = dec.generator().matrix();
    const Matrix id = Matrix::Identity(3, 3);
    const Matrix jump = (a * 0.7).exp() - id;
    const Matrix oracle = 0.7 * (a * 1.5).exp() + 0.3 * (jump * 1.5).exp();
    CHECK((mixture_matrix(mix, 1.5) - oracle).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((mixture_matrix(mix, 1.5).rowwise().sum() - Vector::Ones(3)).norm() < 1e-14);
  }

  TEST_CASE("mixture inverse is bounded where the plain inverse overflows") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("laplace400"));
    const MixtureModel model(dec, 0.1, 1.0);
    const Vector g = parse_function_literal("random(11)", dec.space());
    const MixtureInverse inv = mixture_invert(model, 1.0, g);
    CHECK(inv.residual < 1e-10);
    CHECK(inv.amplification <= inv.bound * (1 + 1e-15));
    CHECK(inv.bound == doctest::Approx(std::exp(1.0) / 0.1));
  }

  TEST_CASE("regularised PIDE") {
    const MixtureModel model(chain2(), 0.5, 1.0);
    CHECK(pide_rate(model, 1.0) == doctest::Approx(0.5 + 0.5 * (1 - std::exp(-1.0))));
    Vector g(2);
    g << 0.3, -0.2;
    const PideResult r = regularised_pide_solve(model, g, 1.0, {0.0, 1.0});
    CHECK((r.trajectory.values[0] - g).norm() < 1e-15);
    CHECK(regularised_pide_residual(model, g, 1.0, 0.5) < 1e-4);
    CHECK_THROWS_AS(regularised_pide_solve(model, g, 1.0, {2.0}), Error);
  }
}
