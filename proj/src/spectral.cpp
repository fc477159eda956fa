#include "mkinv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mkinv/error.hpp"

namespace mkinv {

namespace functions {

FunctionOfOperatorSpec constant(double c) {
  return {"constant", [c](double) { return c; }, {{"c", c}}};
}

FunctionOfOperatorSpec identity() {
  return {"identity", [](double lambda) { return lambda; }, {}};
}

FunctionOfOperatorSpec semigroup(double t) {
  return {"semigroup", [t](double lambda) { return std::exp(-lambda * t); }, {{"t", t}}};
}

FunctionOfOperatorSpec resolvent(double alpha) {
  return {"resolvent", [alpha](double lambda) { return 1.0 / (lambda + alpha); }, {{"alpha", alpha}}};
}

}  // namespace functions

SpectralDecomposition::SpectralDecomposition(SymmetricGenerator generator, Vector eigenvalues,
                                             Matrix eigenvectors, const SpectralTolerances& tol)
    : generator_(std::move(generator)),
      eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      tol_(tol) {
  const Eigen::Index n = generator_.size();
  if (eigenvalues_.size() != n || eigenvectors_.rows() != n || eigenvectors_.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "SpectralDecomposition",
                "eigenpair dimensions do not match the generator");
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    if (eigenvalues_[k] < eigenvalues_[k - 1]) {
      throw Error(ErrorCode::InvalidArgument, "SpectralDecomposition",
                  "eigenvalues must be sorted ascending");
    }
  }
  const double ortho = orthonormality_residual();
  if (!(ortho <= tol_.orthoTol)) {
    throw Error(ErrorCode::InvalidArgument, "SpectralDecomposition",
                "eigenvectors are not orthonormal in L2(m)", {{"residual", ortho}});
  }
}

Vector SpectralDecomposition::coefficients(const Vector& f) const {
  if (f.size() != size()) {
    throw Error(ErrorCode::LengthMismatch, "coefficients", "vector length does not match the state space");
  }
  const Vector weighted = f.cwiseProduct(space().weights());
  return eigenvectors_.transpose() * weighted;
}

Vector SpectralDecomposition::synthesize(const Vector& coeffs) const {
  if (coeffs.size() != size()) {
    throw Error(ErrorCode::LengthMismatch, "synthesize", "coefficient count does not match the basis");
  }
  Vector out = Vector::Zero(size());
  for (Eigen::Index k = 0; k < size(); ++k) {
    if (coeffs[k] != 0.0) out.noalias() += coeffs[k] * eigenvectors_.col(k);
  }
  return out;
}

Vector SpectralDecomposition::apply_multipliers(const Vector& multipliers, const Vector& f) const {
  return synthesize(coefficients(f).cwiseProduct(multipliers));
}

double SpectralDecomposition::orthonormality_residual() const {
  const Matrix gram =
      eigenvectors_.transpose() * space().weights().asDiagonal() * eigenvectors_;
  return (gram - Matrix::Identity(size(), size())).cwiseAbs().maxCoeff();
}

double SpectralDecomposition::reconstruction_residual(const Vector& f) const {
  const Vector af = generator_.apply(f);
  const Vector spectral = apply_multipliers(eigenvalues_, f);
  const double fn = space().norm(f);
  return fn == 0.0 ? space().norm(af) : space().norm(af + spectral) / fn;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> SpectralDecomposition::clusters() const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index first = 0;
  for (Eigen::Index k = 1; k <= size(); ++k) {
    if (k == size() || eigenvalues_[k] - eigenvalues_[k - 1] > tol_.clusterTol) {
      out.emplace_back(first, k);
      first = k;
    }
  }
  return out;
}

SpectralDecomposition spectral_decompose(const SymmetricGenerator& gen, const SpectralTolerances& tol) {
  const WeightedStateSpace& space = gen.space();
  const double asym = check_m_symmetry(gen.matrix(), space);
  if (!(asym <= tol.symTol)) {
    throw Error(ErrorCode::NotMSymmetric, "spectral_decompose",
                "generator is not symmetric in L2(m)", {{"residual", asym}});
  }

  const Vector sqrt_m = space.weights().cwiseSqrt();
  const Vector inv_sqrt_m = sqrt_m.cwiseInverse();
  Matrix s = -(sqrt_m.asDiagonal() * gen.matrix() * inv_sqrt_m.asDiagonal());
  s = 0.5 * (s + s.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "spectral_decompose", "symmetric eigensolver failed");
  }
  Vector lambda = solver.eigenvalues();
  const Eigen::Index n = lambda.size();
  const double scale = std::max(1.0, std::abs(lambda[n - 1]));
  for (Eigen::Index k = 0; k < n; ++k) {
    if (lambda[k] < -tol.eigTol * scale) {
      throw Error(ErrorCode::NegativeEigenvalue, "spectral_decompose",
                  "-A has a negative eigenvalue; the generator is not dissipative",
                  {{"index", double(k)}, {"eigenvalue", lambda[k]}});
    }
    if (std::abs(lambda[k]) <= tol.eigClamp * scale) lambda[k] = 0.0;
  }

  Matrix phi = inv_sqrt_m.asDiagonal() * solver.eigenvectors();
  // Fix the sign so that each eigenvector's largest-magnitude entry is positive;
  // this keeps outputs reproducible across eigensolver versions.
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index idx = 0;
    phi.col(k).cwiseAbs().maxCoeff(&idx);
    if (phi(idx, k) < 0.0) phi.col(k) = -phi.col(k);
  }
  return SpectralDecomposition(gen, std::move(lambda), std::move(phi), tol);
}

Vector apply_function(const SpectralDecomposition& dec, const FunctionOfOperatorSpec& phi,
                      const Vector& f) {
  Vector mult(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    const double lambda = dec.eigenvalues()[k];
    mult[k] = phi.evaluate(lambda);
    if (!std::isfinite(mult[k])) {
      throw Error(ErrorCode::NonFiniteFunctionValue, "apply_function",
                  "function '" + phi.name + "' is not finite on the spectrum",
                  {{"index", double(k)}, {"eigenvalue", lambda}});
    }
  }
  return dec.apply_multipliers(mult, f);
}

Vector semigroup_apply(const SpectralDecomposition& dec, double t, const Vector& f) {
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::NegativeTime, "semigroup_apply", "time must be non-negative", {{"t", t}});
  }
  return apply_function(dec, functions::semigroup(t), f);
}

Vector resolvent_apply(const SpectralDecomposition& dec, double alpha, const Vector& f) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::NonPositiveAlpha, "resolvent_apply", "alpha must be positive",
                {{"alpha", alpha}});
  }
  return apply_function(dec, functions::resolvent(alpha), f);
}

}  // namespace mkinv
