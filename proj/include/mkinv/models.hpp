#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mkinv/generator.hpp"

namespace mkinv {

using ScalarFn = std::function<double(double)>;

enum class Boundary { Dirichlet, Neumann };

/// Af = sigma^2/2 f'' - c f on [left, right].
struct DiffusionSpec {
  double left = 0.0;
  double right = 1.0;
  int gridSize = 50;
  ScalarFn sigma = [](double) { return 1.0; };
  ScalarFn kill = [](double) { return 0.0; };
  Boundary leftBoundary = Boundary::Neumann;
  Boundary rightBoundary = Boundary::Neumann;
};

/// Divergence-form finite differences (1/m)(a f')' - c f with a = 1/2 and
/// speed density m = 1/sigma^2. Neumann ends keep the boundary node with a
/// half cell; Dirichlet ends drop it and absorb the flux. Throws
/// InvalidBoundary (left >= right or gridSize < 3), NonPositiveSigma and
/// InvalidArgument (negative or non-finite c).
SymmetricGenerator build_diffusion(const DiffusionSpec& spec);

/// (1/m)(m f' / 2)' on [-L, L] with m(x) = e^{-r x^2} and Neumann ends.
SymmetricGenerator build_ou(double halfWidth, int gridSize, double r);

struct OuWitness {
  ScalarFn g;  // x^2
  ScalarFn f;  // e^{2r} x^2 - (e^{2r} - 1) / (2r)
};

/// The pair with P_1 f = g for the OU process of rate r.
OuWitness ou_witness_pair(double r);

struct JumpKernelSpec {
  WeightedStateSpace space;
  /// q(x_i, x_j)
  Matrix kernel;
  double rowTol = 1e-12;
};

/// A = Q M - I. Throws AsymmetricKernel, RowMassExceeded, InvalidArgument
/// (negative or mis-sized kernel).
SymmetricGenerator build_jump(const JumpKernelSpec& spec);

/// q(x, y) proportional to e^{-(x - y)^2 / (2 tStar)}, scaled so the heaviest
/// row has mass 1, with the missing mass of the other rows put on the diagonal.
/// Every row of the result has mass exactly 1.
Matrix gaussian_jump_kernel(const WeightedStateSpace& space, double tStar);

/// Wraps an explicit m-symmetric rate matrix on points 0..n-1.
SymmetricGenerator build_chain(const Matrix& a, const Vector& weights);

/// Names accepted by bundled_model.
std::vector<std::string> bundled_model_names();

/// chain2, chain3, laplace50, laplace400, dirichlet50, ou400, jump_gauss.
/// Throws InvalidConfig for unknown names.
SymmetricGenerator bundled_model(const std::string& name);

/// f(x_i) for every grid point.
Vector evaluate_on_grid(const WeightedStateSpace& space, const ScalarFn& f);

}  // namespace mkinv
