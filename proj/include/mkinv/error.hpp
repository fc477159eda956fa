#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mkinv {

enum class ErrorCode {
  NonPositiveWeight,
  LengthMismatch,
  NotIncreasing,
  NotMSymmetric,
  NegativeEigenvalue,
  NonFiniteFunctionValue,
  NegativeTime,
  NonPositiveAlpha,
  InvalidArgument,
  OverflowRisk,
  QuadratureNotConverged,
  ConditioningCapExceeded,
  DegeneratePhi,
  InvalidBoundary,
  NonPositiveSigma,
  AsymmetricKernel,
  RowMassExceeded,
  ParseError,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// True for failures caused by the numerics (overflow, non-convergence)
/// rather than by invalid input.
bool is_numerical(ErrorCode code);

/// The single exception type thrown by the library. `operation` names the
/// public function that failed; `details` carries the offending scalars
/// (exponents, parameters) for machine-readable reporting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string operation, const std::string& message,
        std::map<std::string, double> details = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& operation() const noexcept { return operation_; }
  const std::map<std::string, double>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::string operation_;
  std::map<std::string, double> details_;
};

}  // namespace mkinv
