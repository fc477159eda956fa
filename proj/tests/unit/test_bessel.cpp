#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include "mkinv/bessel.hpp"

using namespace mkinv;

TEST_SUITE("bessel") {
  TEST_CASE("J0 against Boost") {
    for (double x : {0.0, 0.1, 1.0, 2.404825557695773, 7.5, 15.9, 16.1, 40.0, 250.0}) {
      CAPTURE(x);
      CHECK(std::abs(bessel_j0(x) - boost::math::cyl_bessel_j(0, x)) < 1e-14);
    }
    CHECK(bessel_j0(-3.0) == bessel_j0(3.0));
  }

  TEST_CASE("I0 and scaled I0 against Boost") {
    for (double x : {0.0, 0.5, 3.0, 20.0, 100.0, 700.0}) {
      CAPTURE(x);
      const double ref = boost::math::cyl_bessel_i(0, x);
      CHECK(bessel_i0(x) == doctest::Approx(ref).epsilon(1e-14));
      CHECK(bessel_i0_scaled(x) == doctest::Approx(ref * std::exp(-x)).epsilon(1e-14));
    }
    // Scaled form stays finite where I0 overflows: e^{-x} I0(x) ~ 1 / sqrt(2 pi x)
    CHECK(bessel_i0_scaled(1e6) == doctest::Approx(1.0 / std::sqrt(2 * M_PI * 1e6)).epsilon(1e-6));
  }
}
