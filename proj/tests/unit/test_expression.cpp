#include <doctest.h>

#include "mkinv/error.hpp"
#include "mkinv/expression.hpp"
#include "mkinv/models.hpp"

using namespace mkinv;

TEST_SUITE("expression") {
  const Vector pts = Vector::LinSpaced(3, -1, 1);
  const WeightedStateSpace space(pts, Vector::Ones(3));

  TEST_CASE("arithmetic on the grid") {
    const Vector v = parse_function_literal("x^2", space);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 0.0);
    CHECK(v[2] == 1.0);
    CHECK(Expression("-2^2")(0.0) == -4.0);
    CHECK(Expression("2*x + 1/4")(1.0) == 2.25);
    CHECK(Expression("exp(log(3)) + sqrt(abs(-16)) - cos(0) + sin(pi)")(0.0) == doctest::Approx(6.0));
    CHECK(Expression("ind(0, 0.5)")(0.25) == 1.0);
    CHECK(Expression("ind(0, 0.5)")(0.75) == 0.0);
  }

  TEST_CASE("random is seeded and deterministic") {
    const Vector a = parse_function_literal("random(42)", space);
    const Vector b = parse_function_literal("random(42)", space, nullptr, 99);
    const Vector c = parse_function_literal("random", space, nullptr, 7);
    CHECK(a == b);
    CHECK(c == parse_function_literal("random", space, nullptr, 7));
    CHECK(c != parse_function_literal("random", space, nullptr, 8));
    CHECK(a.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(Expression("random").grid_only());
    CHECK_THROWS_AS(Expression("random")(0.0), Error);
  }

  TEST_CASE("mode needs a decomposition") {
    const SpectralDecomposition dec = spectral_decompose(bundled_model("chain2"));
    const Vector m1 = parse_function_literal("mode(1)", dec.space(), &dec);
    CHECK((m1 - dec.eigenvectors().col(1)).norm() < 1e-15);
    CHECK_THROWS_AS(parse_function_literal("mode(1)", dec.space()), Error);
    CHECK_THROWS_AS(parse_function_literal("mode(5)", dec.space(), &dec), Error);
  }

  TEST_CASE("parse errors report the position") {
    try {
      Expression("x + * 2");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      REQUIRE(e.details().count("position") == 1);
      CHECK(e.details().at("position") == 4.0);
    }
    CHECK_THROWS_AS(Expression("foo(x)"), Error);
    CHECK_THROWS_AS(Expression("(x"), Error);
  }
}
