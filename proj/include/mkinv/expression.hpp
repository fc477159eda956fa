#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "mkinv/spectral.hpp"

namespace mkinv {

struct ExpressionNode;

/// A parsed function literal in x. Grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'x' | 'pi' | '(' expr ')' | call
///   call    := exp|log|sqrt|abs|sin|cos '(' expr ')'
///            | 'ind' '(' number ',' number ')'     1 on [a, b], else 0
///            | 'random' ['(' integer ')']          uniform on [-1, 1] per node
///            | 'mode' '(' integer ')'              k-th eigenvector
///
/// Bare `random` takes its seed from the evaluation context.
class Expression {
 public:
  /// Throws ParseError with the offending character position in details.
  explicit Expression(const std::string& source);
  ~Expression();
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  const std::string& source() const noexcept { return source_; }

  /// True when the expression uses random or mode and so has no pointwise value.
  bool grid_only() const noexcept;

  /// Value at a single point. Throws ParseError for grid-only expressions.
  double operator()(double x) const;

  /// Values on the grid. `dec` is required by mode(k).
  Vector evaluate(const WeightedStateSpace& space, const SpectralDecomposition* dec = nullptr,
                  std::uint64_t seed = 0) const;

 private:
  std::string source_;
  std::unique_ptr<ExpressionNode> root_;
};

/// Expression(expr).evaluate(space, dec, seed)
Vector parse_function_literal(const std::string& expr, const WeightedStateSpace& space,
                              const SpectralDecomposition* dec = nullptr, std::uint64_t seed = 0);

}  // namespace mkinv
