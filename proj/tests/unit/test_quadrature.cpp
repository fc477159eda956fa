#include <doctest.h>

#include <cmath>

#include "mkinv/bessel.hpp"
#include "mkinv/error.hpp"
#include "mkinv/laplace.hpp"
#include "mkinv/quadrature.hpp"

using namespace mkinv;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    const auto& rule = gauss_legendre(5);
    double sum = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 8);
    CHECK(sum == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_legendre(1), Error);
  }

  TEST_CASE("scalar and vector quadrature") {
    QuadratureConfig config;
    config.spacing = PanelSpacing::Uniform;
    CHECK(scalar_quadrature([](double s) { return std::sin(s); }, 0.0, M_PI, config) ==
          doctest::Approx(2.0).epsilon(1e-13));

    config.sMax = 40.0;
    const auto r = bochner_quadrature([](double s) { return std::exp(-s); },
                                      [](double s) {
                                        Vector v(2);
                                        v << 1.0, s;
                                        return v;
                                      },
                                      config, TailEnvelope{1.0, 0.5});
    CHECK(r.value[0] == doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-13));
    CHECK(r.value[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.tailBound == doctest::Approx(2.0 * std::exp(-20.0)));
  }

  TEST_CASE("Laplace transforms of Bessel kernels") {
    for (double t : {0.5, 1.0, 3.0}) {
      const LaplacePair j = laplace_j0_identity(t, 1.0);
      CHECK(std::abs(j.lhs - j.rhs) < 1e-12);
      const LaplacePair i = laplace_i0_identity(t, 0.5);
      CHECK(i.lhs == doctest::Approx(i.rhs).epsilon(1e-11));
    }
    CHECK_THROWS_AS(laplace_j0_identity(1.0, 0.0), Error);
  }

  TEST_CASE("truncation points bound the tail") {
    const double s = exponential_truncation(1.0, 2.0, 1e-12);
    CHECK(std::exp(-2.0 * s) / 2.0 <= 1e-12 * (1 + 1e-12));
    const double g = growth_decay_truncation(4.0, 1.0, std::log(1e-12));
    CHECK(std::exp(2.0 * std::sqrt(4.0 * g) - g) / (1.0 - std::sqrt(4.0 / g)) <= 1e-12 * (1 + 1e-9));
  }
}
