#include <doctest.h>

#include <cmath>

#include "mkinv/error.hpp"
#include "mkinv/models.hpp"
#include "mkinv/spectral.hpp"

using namespace mkinv;

TEST_SUITE("models") {
  TEST_CASE("Dirichlet Laplacian on [0, pi]") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("dirichlet50"));
    for (int k = 1; k <= 5; ++k) {
      CAPTURE(k);
      CHECK(dec.eigenvalues()[k - 1] == doctest::Approx(k * k / 2.0).epsilon(0.02));
    }
  }

  TEST_CASE("constant killing shifts the spectrum") {
    DiffusionSpec spec;
    spec.gridSize = 30;
    const SpectralDecomposition plain = spectral_decompose(build_diffusion(spec));
    spec.kill = [](double) { return 0.75; };
    const SpectralDecomposition killed = spectral_decompose(build_diffusion(spec));
    CHECK((killed.eigenvalues() - plain.eigenvalues() - Vector::Constant(30, 0.75)).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("Ornstein-Uhlenbeck ladder and mean decay") {
    const double r = 1.0;
    const SpectralDecomposition dec = spectral_decompose(bundled_model("ou400"));
    CHECK(dec.eigenvalues()[0] == 0.0);
    for (int k = 1; k <= 4; ++k) CHECK(dec.eigenvalues()[k] == doctest::Approx(r * k).epsilon(0.02));

    const Vector x = dec.space().points();
    const Vector moved = semigroup_apply(dec, 0.5, x);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) > 2.0 || std::abs(x[i]) < 0.1) continue;
      CHECK(moved[i] == doctest::Approx(x[i] * std::exp(-0.5 * r)).epsilon(0.01));
    }
  }

  TEST_CASE("OU witness pair takes negative values") {
    const OuWitness w = ou_witness_pair(1.0);
    CHECK(w.f(0.0) == doctest::Approx(-3.1945280).epsilon(1e-7));
    CHECK(w.g(2.0) == 4.0);
  }

  TEST_CASE("Gaussian jump kernel") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("jump_gauss"));
    CHECK(dec.lambda_max() <= 1.0 + 1e-12);
    const Matrix a = dec.generator().matrix();
    CHECK(a.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (i != j) CHECK(a(i, j) >= 0.0);
  }

  TEST_CASE("builder errors") {
    DiffusionSpec spec;
    spec.right = spec.left;
    CHECK_THROWS_AS(build_diffusion(spec), Error);
    spec = {};
    spec.sigma = [](double) { return 0.0; };
    CHECK_THROWS_AS(build_diffusion(spec), Error);

    const Vector pts = Vector::LinSpaced(3, 0, 2);
    const WeightedStateSpace space(pts, Vector::Ones(3));
    Matrix q = Matrix::Constant(3, 3, 0.2);
    q(0, 1) = 0.3;
    CHECK_THROWS_AS(build_jump({space, q}), Error);  // asymmetric
    q = Matrix::Constant(3, 3, 0.5);
    CHECK_THROWS_AS(build_jump({space, q}), Error);  // row mass 1.5
    CHECK_THROWS_AS(bundled_model("nope"), Error);
  }
}
