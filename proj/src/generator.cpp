#include "mkinv/generator.hpp"

#include <algorithm>
#include <cmath>

#include "mkinv/error.hpp"

namespace mkinv {

double check_m_symmetry(const Matrix& a, const WeightedStateSpace& space) {
  if (a.rows() != a.cols() || a.rows() != space.size()) {
    throw Error(ErrorCode::LengthMismatch, "check_m_symmetry",
                "matrix must be square and match the state space",
                {{"rows", double(a.rows())}, {"cols", double(a.cols())}, {"space", double(space.size())}});
  }
  const Vector& m = space.weights();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const double lhs = m[i] * a(i, j);
      const double rhs = m[j] * a(j, i);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  return worst;
}

SymmetricGenerator::SymmetricGenerator(WeightedStateSpace space, Matrix matrix, double symTol)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const double residual = check_m_symmetry(matrix_, space_);
  if (!(residual <= symTol)) {
    throw Error(ErrorCode::NotMSymmetric, "SymmetricGenerator",
                "generator is not symmetric in L2(m)", {{"residual", residual}, {"symTol", symTol}});
  }
  if (!matrix_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "SymmetricGenerator", "generator has non-finite entries");
  }
}

Vector SymmetricGenerator::apply(const Vector& f) const {
  if (f.size() != size()) {
    throw Error(ErrorCode::LengthMismatch, "SymmetricGenerator::apply",
                "vector length does not match the state space");
  }
  return matrix_ * f;
}

}  // namespace mkinv
