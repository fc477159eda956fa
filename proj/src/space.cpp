#include "mkinv/space.hpp"

#include <cmath>
#include <string>

#include "mkinv/error.hpp"

namespace mkinv {

namespace {

void validate(const Vector& points, const Vector& weights) {
  if (points.size() != weights.size()) {
    throw Error(ErrorCode::LengthMismatch, "build_space",
                "points and weights differ in length",
                {{"points", double(points.size())}, {"weights", double(weights.size())}});
  }
  if (points.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "build_space", "a state space needs at least two points");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorCode::NonPositiveWeight, "build_space",
                  "weight at index " + std::to_string(i) + " is not strictly positive",
                  {{"index", double(i)}, {"weight", weights[i]}});
    }
    if (!std::isfinite(points[i])) {
      throw Error(ErrorCode::InvalidArgument, "build_space", "non-finite grid point");
    }
    if (i > 0 && !(points[i] > points[i - 1])) {
      throw Error(ErrorCode::NotIncreasing, "build_space",
                  "grid points must be strictly increasing", {{"index", double(i)}});
    }
  }
}

void check_length(const WeightedStateSpace& space, const Vector& f, const char* op) {
  if (f.size() != space.size()) {
    throw Error(ErrorCode::LengthMismatch, op, "vector length does not match the state space",
                {{"expected", double(space.size())}, {"actual", double(f.size())}});
  }
}

}  // namespace

WeightedStateSpace::WeightedStateSpace(std::span<const double> points,
                                       std::span<const double> weights)
    : points_(Eigen::Map<const Vector>(points.data(), Eigen::Index(points.size()))),
      weights_(Eigen::Map<const Vector>(weights.data(), Eigen::Index(weights.size()))) {
  validate(points_, weights_);
}

WeightedStateSpace::WeightedStateSpace(const Vector& points, const Vector& weights)
    : points_(points), weights_(weights) {
  validate(points_, weights_);
}

double WeightedStateSpace::inner(const Vector& f, const Vector& g) const {
  check_length(*this, f, "inner");
  check_length(*this, g, "inner");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < size(); ++i) sum += f[i] * g[i] * weights_[i];
  return sum;
}

double WeightedStateSpace::norm(const Vector& f) const { return std::sqrt(inner(f, f)); }

WeightedStateSpace build_space(std::span<const double> points, std::span<const double> weights) {
  return WeightedStateSpace(points, weights);
}

double inner(const WeightedStateSpace& space, const Vector& f, const Vector& g) {
  return space.inner(f, g);
}

}  // namespace mkinv
