#pragma once

#include <Eigen/Dense>
#include <span>

namespace mkinv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Finite state space: ordered grid locations carrying positive masses m_i.
/// The masses define the L2(m) inner product (f, g) = sum_i f_i g_i m_i.
class WeightedStateSpace {
 public:
  /// Throws NonPositiveWeight, LengthMismatch, NotIncreasing, InvalidArgument
  /// (fewer than two points).
  WeightedStateSpace(std::span<const double> points, std::span<const double> weights);
  WeightedStateSpace(const Vector& points, const Vector& weights);

  Eigen::Index size() const noexcept { return points_.size(); }
  const Vector& points() const noexcept { return points_; }
  const Vector& weights() const noexcept { return weights_; }
  double total_mass() const noexcept { return weights_.sum(); }

  double inner(const Vector& f, const Vector& g) const;
  double norm(const Vector& f) const;

 private:
  Vector points_;
  Vector weights_;
};

WeightedStateSpace build_space(std::span<const double> points, std::span<const double> weights);

double inner(const WeightedStateSpace& space, const Vector& f, const Vector& g);

}  // namespace mkinv
