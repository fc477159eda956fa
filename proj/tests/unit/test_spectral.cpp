#include <doctest.h>

#include <cmath>

#include "mkinv/error.hpp"
#include "mkinv/models.hpp"
#include "mkinv/spectral.hpp"

using namespace mkinv;

TEST_SUITE("spectral") {
  TEST_CASE("two-state chain closed form") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("chain2"));
    CHECK(dec.eigenvalues()[0] == 0.0);
    CHECK(dec.eigenvalues()[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dec.orthonormality_residual() < 1e-14);

    Vector e0(2);
    e0 << 1, 0;
    const Vector p = semigroup_apply(dec, 1.0, e0);
    CHECK(p[0] == doctest::Approx(0.5 * (1 + std::exp(-1.0))).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.5 * (1 - std::exp(-1.0))).epsilon(1e-14));

    // (alpha - A)^{-1} e0 with alpha = 1: modes 1/1 and 1/2
    const Vector u = resolvent_apply(dec, 1.0, e0);
    CHECK(u[0] == doctest::Approx(0.75));
    CHECK(u[1] == doctest::Approx(0.25));
  }

  TEST_CASE("functions of the operator") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("chain3"));
    Vector f(3);
    f << 1, -2, 0.5;
    CHECK((apply_function(dec, functions::constant(1.0), f) - f).norm() < 1e-14);
    // identity(lambda) = lambda, so the result is -A f
    const Vector minusAf = -dec.generator().apply(f);
    CHECK((apply_function(dec, functions::identity(), f) - minusAf).norm() < 1e-13);
    CHECK(dec.reconstruction_residual(f) < 1e-13);
    const Vector twice = semigroup_apply(dec, 0.3, semigroup_apply(dec, 0.4, f));
    CHECK((twice - semigroup_apply(dec, 0.7, f)).norm() < 1e-14);
  }

  TEST_CASE("eigenvectors are m-orthonormal with unequal weights") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("chain3"));
    const auto& space = dec.space();
    for (Eigen::Index j = 0; j < 3; ++j)
      for (Eigen::Index k = 0; k < 3; ++k)
        CHECK(space.inner(dec.eigenvectors().col(j), dec.eigenvectors().col(k)) ==
              doctest::Approx(j == k ? 1.0 : 0.0));
    CHECK(dec.lambda_max() == doctest::Approx(2.0));
  }

  TEST_CASE("errors") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("chain2"));
    Vector f = Vector::Ones(2);
    CHECK_THROWS_AS(semigroup_apply(dec, -1.0, f), Error);
    CHECK_THROWS_AS(resolvent_apply(dec, 0.0, f), Error);
    FunctionOfOperatorSpec nan{"nan", [](double) { return std::nan(""); }, {}};
    CHECK_THROWS_AS(apply_function(dec, nan, f), Error);

    // A positive-definite "generator" has negative eigenvalues of -A.
    Matrix growth(2, 2);
    growth << 1, 0, 0, 1;
    CHECK_THROWS_AS(spectral_decompose(build_chain(growth, Vector::Ones(2))), Error);
  }
}
