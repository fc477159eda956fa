#include <doctest.h>

#include <cmath>

#include "mkinv/error.hpp"
#include "mkinv/expression.hpp"
#include "mkinv/inversion.hpp"
#include "mkinv/models.hpp"

using namespace mkinv;

namespace {
const SpectralDecomposition& chain2() {
  static const SpectralDecomposition dec = spectral_decompose(bundled_model("chain2"));
  return dec;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_SUITE("inversion") {
  TEST_CASE("two-state inverse recovers the unit vector") {
    const InverseProblem problem(chain2(), 1.0, vec2(0.6839397, 0.3160603));
    const Vector f = invert_spectral(problem);
    CHECK(std::abs(f[0] - 1.0) < 1e-5);
    CHECK(std::abs(f[1]) < 1e-5);

    for (double alpha : {0.5, 1.0, 2.0}) {
      const Vector b = invert_bessel(problem, alpha);
      CHECK((b - f).norm() <= 1e-5 * f.norm());
    }
  }

  TEST_CASE("backward Cauchy trajectory ends at the inverse") {
    const InverseProblem problem(chain2(), 1.0, vec2(0.6839397, 0.3160603));
    const Trajectory u = solve_backward_cauchy(problem, {0.0, 0.5, 1.0});
    CHECK((u.values[0] - problem.data()).norm() < 1e-14);
    CHECK((u.values[2] - invert_spectral(problem)).norm() < 1e-14);
    CHECK(backward_cauchy_residual(problem, 0.5) < 1e-4);
  }

  TEST_CASE("J alpha forms agree and Picard obeys its bound") {
    const Vector f = vec2(1.0, -0.3);
    for (double t : {0.1, 1.0, 5.0}) {
      const Vector s = j_alpha_spectral(chain2(), 1.0, t, f);
      const Vector q = j_alpha_quadrature(chain2(), 1.0, t, f);
      CHECK((s - q).norm() <= 1e-6 * s.norm());
    }
    const PicardResult p = picard_j_alpha(chain2(), 1.0, f, 1.0, 8);
    REQUIRE(p.supErrors.size() == 9);
    for (size_t n = 0; n < p.supErrors.size(); ++n) CHECK(p.supErrors[n] <= p.bounds[n]);
    CHECK(p.bounds[8] == doctest::Approx(chain2().space().norm(f) / 40320.0));

    const Trajectory c = cauchy_solve_j(chain2(), 1.0, f, {0.0, 2.0});
    CHECK((c.values[0] - resolvent_apply(chain2(), 1.0, f)).norm() < 1e-15);
    CHECK((c.values[1] - j_alpha_spectral(chain2(), 1.0, 2.0, f)).norm() < 1e-15);
  }

  TEST_CASE("Laplace diagnostic closed value") {
    const LaplacePair p = laplace_diagnostic(chain2(), 1.0, vec2(1.0, 0.0), 1.0);
    CHECK(p.rhs == doctest::Approx(5.0 / 12.0).epsilon(1e-14));
    CHECK(std::abs(p.lhs - p.rhs) < 1e-8);
    CHECK(laplace_diagnostic(chain2(), 1.0, vec2(1.0, 0.0), 0.0).rhs == doctest::Approx(1.0));
  }

  TEST_CASE("conditioning report grades the amplification") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("laplace50"));
    const Vector g = parse_function_literal("mode(1) + mode(20)", dec.space(), &dec);
    const ConditioningReport small = membership_criterion(InverseProblem(dec, 1e-3, g), 1.0);
    CHECK(small.flag == WellPosedness::Ok);
    const ConditioningReport large = membership_criterion(InverseProblem(dec, 1.0, g), 1.0);
    CHECK(large.flag == WellPosedness::Severe);
    CHECK(large.amplificationLog10 == doctest::Approx(dec.eigenvalues()[20] / std::log(10.0)));
  }

  TEST_CASE("single-mode h function") {
    const Vector f = chain2().eigenvectors().col(1);
    const double beta = 2.0 * (1.0 - 0.5) + 1.0;
    CHECK(h_spectral(chain2(), f, 1.0, 0.5, 0.3) == doctest::Approx(std::exp(-0.3 / beta) / beta).epsilon(1e-14));
    CHECK(h_quadrature(chain2(), f, 1.0, 0.5, 0.3) == doctest::Approx(std::exp(-0.3 / beta) / beta).epsilon(1e-10));
  }

  TEST_CASE("errors") {
    const Vector g = vec2(1.0, 0.0);
    CHECK_THROWS_AS(InverseProblem(chain2(), 0.0, g), Error);
    CHECK_THROWS_AS(InverseProblem(chain2(), 1.0, Vector::Ones(3)), Error);
    CHECK_THROWS_AS(j_alpha_spectral(chain2(), -1.0, 1.0, g), Error);

    const SpectralDecomposition big = spectral_decompose(bundled_model("laplace400"));
    const InverseProblem wild(big, 1.0, parse_function_literal("random(1)", big.space()));
    try {
      invert_spectral(wild);
      FAIL("expected OverflowRisk");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OverflowRisk);
      CHECK(is_numerical(e.code()));
    }
    try {
      invert_bessel(wild, 1.0);
      FAIL("expected ConditioningCapExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConditioningCapExceeded);
    }
  }
}
