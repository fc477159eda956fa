#pragma once

#include "mkinv/space.hpp"

namespace mkinv {

/// Relative m-asymmetry of a rate matrix:
///   max_ij |m_i A_ij - m_j A_ji| / max(|m_i A_ij|, |m_j A_ji|, 1).
/// Zero means (Af, g) = (f, Ag) holds exactly in L2(m).
double check_m_symmetry(const Matrix& a, const WeightedStateSpace& space);

/// An m-symmetric rate matrix on a weighted state space. Non-negativity of -A
/// is verified when the generator is decomposed, not here.
class SymmetricGenerator {
 public:
  static constexpr double kDefaultSymTol = 1e-10;

  /// Throws LengthMismatch for a non-square or mis-sized matrix and
  /// NotMSymmetric when the residual exceeds `symTol`.
  SymmetricGenerator(WeightedStateSpace space, Matrix matrix, double symTol = kDefaultSymTol);

  const WeightedStateSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Eigen::Index size() const noexcept { return space_.size(); }

  Vector apply(const Vector& f) const;

 private:
  WeightedStateSpace space_;
  Matrix matrix_;
};

}  // namespace mkinv
