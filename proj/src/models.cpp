#include "mkinv/models.hpp"

#include <algorithm>
#include <cmath>

#include "mkinv/error.hpp"

namespace mkinv {

namespace {

// (1/m)(a f')' - c f on a uniform grid. Nodes sit on Neumann ends and one
// step inside Dirichlet ends.
SymmetricGenerator divergence_form(double left, double right, int n, const ScalarFn& a, const ScalarFn& m,
                                   const ScalarFn& c, Boundary lb, Boundary rb) {
  const int dl = lb == Boundary::Dirichlet ? 1 : 0;
  const int dr = rb == Boundary::Dirichlet ? 1 : 0;
  const double h = (right - left) / double(n - 1 + dl + dr);
  Vector x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = left + double(i + dl) * h;
    w[i] = m(x[i]) * h;
  }
  if (!dl) w[0] *= 0.5;
  if (!dr) w[n - 1] *= 0.5;

  Matrix gen = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double flux = a(x[i] + 0.5 * h) / h;
    gen(i, i + 1) += flux;
    gen(i + 1, i) += flux;
    gen(i, i) -= flux;
    gen(i + 1, i + 1) -= flux;
  }
  if (dl) gen(0, 0) -= a(left + 0.5 * h) / h;
  if (dr) gen(n - 1, n - 1) -= a(right - 0.5 * h) / h;
  for (int i = 0; i < n; ++i) {
    gen.row(i) /= w[i];
    const double ci = c(x[i]);
    if (!(ci >= 0.0) || !std::isfinite(ci)) {
      throw Error(ErrorCode::InvalidArgument, "build_diffusion", "killing rate must be finite and >= 0",
                  {{"x", x[i]}, {"c", ci}});
    }
    gen(i, i) -= ci;
  }
  return SymmetricGenerator(WeightedStateSpace(x, w), std::move(gen), 1e-12);
}

}  // namespace

SymmetricGenerator build_diffusion(const DiffusionSpec& spec) {
  if (!(spec.left < spec.right) || !std::isfinite(spec.left) || !std::isfinite(spec.right)) {
    throw Error(ErrorCode::InvalidBoundary, "build_diffusion", "need a finite interval with left < right",
                {{"left", spec.left}, {"right", spec.right}});
  }
  if (spec.gridSize < 3) {
    throw Error(ErrorCode::InvalidBoundary, "build_diffusion", "gridSize must be >= 3",
                {{"gridSize", double(spec.gridSize)}});
  }
  if (!spec.sigma || !spec.kill) {
    throw Error(ErrorCode::InvalidArgument, "build_diffusion", "sigma and kill must be set");
  }
  const ScalarFn sigma = spec.sigma;
  const ScalarFn speed = [sigma](double x) {
    const double s = sigma(x);
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::NonPositiveSigma, "build_diffusion", "sigma must be positive and finite",
                  {{"x", x}, {"sigma", s}});
    }
    return 1.0 / (s * s);
  };
  return divergence_form(spec.left, spec.right, spec.gridSize, [](double) { return 0.5; }, speed, spec.kill,
                         spec.leftBoundary, spec.rightBoundary);
}

SymmetricGenerator build_ou(double halfWidth, int gridSize, double r) {
  if (!(halfWidth > 0.0) || !(r > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "build_ou", "need L > 0 and r > 0", {{"L", halfWidth}, {"r", r}});
  }
  if (gridSize < 3) {
    throw Error(ErrorCode::InvalidBoundary, "build_ou", "gridSize must be >= 3", {{"gridSize", double(gridSize)}});
  }
  const ScalarFn m = [r](double x) { return std::exp(-r * x * x); };
  const ScalarFn a = [r](double x) { return 0.5 * std::exp(-r * x * x); };
  return divergence_form(-halfWidth, halfWidth, gridSize, a, m, [](double) { return 0.0; }, Boundary::Neumann,
                         Boundary::Neumann);
}

OuWitness ou_witness_pair(double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "ou_witness_pair", "r must be positive", {{"r", r}});
  const double e2r = std::exp(2.0 * r);
  const double shift = std::expm1(2.0 * r) / (2.0 * r);
  return {[](double x) { return x * x; }, [e2r, shift](double x) { return e2r * x * x - shift; }};
}

SymmetricGenerator build_jump(const JumpKernelSpec& spec) {
  const Eigen::Index n = spec.space.size();
  const Matrix& q = spec.kernel;
  if (q.rows() != n || q.cols() != n) {
    throw Error(ErrorCode::LengthMismatch, "build_jump", "kernel must be n x n",
                {{"n", double(n)}, {"rows", double(q.rows())}, {"cols", double(q.cols())}});
  }
  const Vector& m = spec.space.weights();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(q(i, j) >= 0.0) || !std::isfinite(q(i, j))) {
        throw Error(ErrorCode::InvalidArgument, "build_jump", "kernel entries must be finite and >= 0",
                    {{"i", double(i)}, {"j", double(j)}, {"q", q(i, j)}});
      }
      const double scale = std::max({std::abs(q(i, j)), std::abs(q(j, i)), 1e-300});
      if (std::abs(q(i, j) - q(j, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::AsymmetricKernel, "build_jump", "kernel must be symmetric",
                    {{"i", double(i)}, {"j", double(j)}, {"qij", q(i, j)}, {"qji", q(j, i)}});
      }
    }
    const double mass = q.row(i).dot(m);
    if (mass > 1.0 + spec.rowTol) {
      throw Error(ErrorCode::RowMassExceeded, "build_jump", "row mass of q m exceeds 1",
                  {{"row", double(i)}, {"mass", mass}});
    }
  }
  Matrix a = q * m.asDiagonal();
  a.diagonal().array() -= 1.0;
  return SymmetricGenerator(spec.space, std::move(a), 1e-12);
}

Matrix gaussian_jump_kernel(const WeightedStateSpace& space, double tStar) {
  if (!(tStar > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gaussian_jump_kernel", "tStar must be positive", {{"tStar", tStar}});
  }
  const Eigen::Index n = space.size();
  const Vector& x = space.points();
  const Vector& m = space.weights();
  Matrix q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = x[i] - x[j];
      q(i, j) = std::exp(-d * d / (2.0 * tStar));
    }
  }
  q /= (q * m).maxCoeff();
  const Vector mass = q * m;
  for (Eigen::Index i = 0; i < n; ++i) q(i, i) += (1.0 - mass[i]) / m[i];
  return q;
}

SymmetricGenerator build_chain(const Matrix& a, const Vector& weights) {
  Vector points(weights.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) points[i] = double(i);
  return SymmetricGenerator(WeightedStateSpace(points, weights), a);
}

std::vector<std::string> bundled_model_names() {
  return {"chain2", "chain3", "laplace50", "laplace400", "dirichlet50", "ou400", "jump_gauss"};
}

SymmetricGenerator bundled_model(const std::string& name) {
  if (name == "chain2") {
    Matrix a(2, 2);
    a << -0.5, 0.5, 0.5, -0.5;
    return build_chain(a, Vector::Ones(2));
  }
  if (name == "chain3") {
    Matrix a(3, 3);
    a << -1.0, 1.0, 0.0, 0.5, -1.0, 0.5, 0.0, 1.0, -1.0;
    Vector m(3);
    m << 1.0, 2.0, 1.0;
    return build_chain(a, m);
  }
  if (name == "laplace50" || name == "laplace400") {
    DiffusionSpec spec;
    spec.gridSize = name == "laplace50" ? 50 : 400;
    return build_diffusion(spec);
  }
  if (name == "dirichlet50") {
    DiffusionSpec spec;
    spec.right = std::acos(-1.0);
    spec.leftBoundary = spec.rightBoundary = Boundary::Dirichlet;
    return build_diffusion(spec);
  }
  if (name == "ou400") return build_ou(6.0, 400, 1.0);
  if (name == "jump_gauss") {
    const int n = 41;
    const double h = 6.0 / (n - 1);
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = -3.0 + h * i;
    WeightedStateSpace space(x, Vector::Constant(n, h));
    Matrix q = gaussian_jump_kernel(space, 1.0);
    return build_jump({space, std::move(q)});
  }
  throw Error(ErrorCode::InvalidConfig, "bundled_model", "unknown bundled model '" + name + "'");
}

Vector evaluate_on_grid(const WeightedStateSpace& space, const ScalarFn& f) {
  Vector out(space.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = f(space.points()[i]);
  return out;
}

}  // namespace mkinv
