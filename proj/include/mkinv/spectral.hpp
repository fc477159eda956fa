#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mkinv/generator.hpp"

namespace mkinv {

struct SpectralTolerances {
  double symTol = 1e-10;
  /// Eigenvalues below -eigTol * max(1, lambda_max) reject the generator.
  double eigTol = 1e-8;
  /// |lambda| <= eigClamp * max(1, lambda_max) is set to exactly zero.
  double eigClamp = 1e-12;
  double orthoTol = 1e-10;
  double reconTol = 1e-8;
  double clusterTol = 1e-9;
};

/// A scalar map lambda -> phi(lambda) on [0, inf), applied to -A mode by mode.
struct FunctionOfOperatorSpec {
  std::string name;
  std::function<double(double)> evaluate;
  std::map<std::string, double> parameters;
};

namespace functions {
FunctionOfOperatorSpec constant(double c);
FunctionOfOperatorSpec identity();
/// e^{-lambda t}
FunctionOfOperatorSpec semigroup(double t);
/// 1 / (lambda + alpha)
FunctionOfOperatorSpec resolvent(double alpha);
}  // namespace functions

/// Eigenpairs of -A: eigenvalues ascending, eigenvectors orthonormal in L2(m)
/// and stored as the columns of `eigenvectors()`.
class SpectralDecomposition {
 public:
  /// Wraps precomputed eigenpairs. Throws InvalidArgument when the sizes do not
  /// match or the eigenvectors are not m-orthonormal within `tol.orthoTol`.
  SpectralDecomposition(SymmetricGenerator generator, Vector eigenvalues, Matrix eigenvectors,
                        const SpectralTolerances& tol = {});

  const SymmetricGenerator& generator() const noexcept { return generator_; }
  const WeightedStateSpace& space() const noexcept { return generator_.space(); }
  const Vector& eigenvalues() const noexcept { return eigenvalues_; }
  const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
  Eigen::Index size() const noexcept { return eigenvalues_.size(); }
  double lambda_max() const noexcept { return eigenvalues_[size() - 1]; }
  const SpectralTolerances& tolerances() const noexcept { return tol_; }

  /// Mode coefficients (phi_k, f).
  Vector coefficients(const Vector& f) const;
  /// sum_k c_k phi_k, accumulated in ascending-lambda order.
  Vector synthesize(const Vector& coeffs) const;
  /// sum_k w_k (phi_k, f) phi_k.
  Vector apply_multipliers(const Vector& multipliers, const Vector& f) const;

  /// max_jk |(phi_j, phi_k) - delta_jk|
  double orthonormality_residual() const;
  /// ||A f + sum_k lambda_k (phi_k, f) phi_k|| / ||f||
  double reconstruction_residual(const Vector& f) const;
  /// Index ranges [first, last) of eigenvalues closer than clusterTol.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters() const;

 private:
  SymmetricGenerator generator_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
  SpectralTolerances tol_;
};

/// Diagonalises -A through the similarity S = M^{1/2} (-A) M^{-1/2}.
/// Throws NotMSymmetric or NegativeEigenvalue.
SpectralDecomposition spectral_decompose(const SymmetricGenerator& gen,
                                         const SpectralTolerances& tol = {});

/// sum_k phi(lambda_k) (phi_k, f) phi_k. Throws NonFiniteFunctionValue.
Vector apply_function(const SpectralDecomposition& dec, const FunctionOfOperatorSpec& phi,
                      const Vector& f);

/// P_t f. Throws NegativeTime.
Vector semigroup_apply(const SpectralDecomposition& dec, double t, const Vector& f);

/// U^alpha f = (alpha - A)^{-1} f. Throws NonPositiveAlpha.
Vector resolvent_apply(const SpectralDecomposition& dec, double alpha, const Vector& f);

}  // namespace mkinv
