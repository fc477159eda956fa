#include <doctest.h>

#include <vector>

#include "mkinv/error.hpp"
#include "mkinv/generator.hpp"
#include "mkinv/space.hpp"

using namespace mkinv;

namespace {
ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected mkinv::Error");
  return ErrorCode::InvalidArgument;
}
}  // namespace

TEST_SUITE("space") {
  TEST_CASE("inner product is weighted by m") {
    const std::vector<double> x{0.0, 1.0, 2.0}, m{1.0, 2.0, 3.0};
    const WeightedStateSpace space = build_space(x, m);
    Vector f(3), g(3);
    f << 1, 2, 3;
    g << 1, 1, 1;
    CHECK(space.inner(f, g) == doctest::Approx(1 + 4 + 9));
    CHECK(space.norm(g) == doctest::Approx(std::sqrt(6.0)));
    CHECK(space.total_mass() == doctest::Approx(6.0));
    CHECK(inner(space, f, f) == doctest::Approx(1 + 8 + 27));
  }

  TEST_CASE("construction errors") {
    const std::vector<double> x{0.0, 1.0}, bad{1.0, 0.0}, shortM{1.0}, unsorted{1.0, 0.5}, m2{1.0, 1.0};
    CHECK(code_of([&] { build_space(x, bad); }) == ErrorCode::NonPositiveWeight);
    CHECK(code_of([&] { build_space(x, shortM); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { build_space(unsorted, m2); }) == ErrorCode::NotIncreasing);
  }

  TEST_CASE("m-symmetry of rate matrices") {
    const std::vector<double> x{0.0, 1.0}, m{1.0, 2.0};
    const WeightedStateSpace space = build_space(x, m);
    Matrix good(2, 2), bad(2, 2);
    good << -2, 2, 1, -1;  // m_0 a_01 = 2 = m_1 a_10
    bad << -1, 1, 1, -1;
    CHECK(check_m_symmetry(good, space) == doctest::Approx(0.0));
    CHECK(check_m_symmetry(bad, space) > 0.1);
    CHECK_NOTHROW(SymmetricGenerator(space, good));
    CHECK(code_of([&] { SymmetricGenerator(space, bad); }) == ErrorCode::NotMSymmetric);
  }
}
