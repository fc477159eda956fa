#include "mkinv/error.hpp"

namespace mkinv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotIncreasing: return "NotIncreasing";
    case ErrorCode::NotMSymmetric: return "NotMSymmetric";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::NonFiniteFunctionValue: return "NonFiniteFunctionValue";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OverflowRisk: return "OverflowRisk";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::ConditioningCapExceeded: return "ConditioningCapExceeded";
    case ErrorCode::DegeneratePhi: return "DegeneratePhi";
    case ErrorCode::InvalidBoundary: return "InvalidBoundary";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::AsymmetricKernel: return "AsymmetricKernel";
    case ErrorCode::RowMassExceeded: return "RowMassExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEigenvalue:
    case ErrorCode::NonFiniteFunctionValue:
    case ErrorCode::OverflowRisk:
    case ErrorCode::QuadratureNotConverged:
    case ErrorCode::ConditioningCapExceeded:
    case ErrorCode::DegeneratePhi:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, std::string operation, const std::string& message,
             std::map<std::string, double> details)
    : std::runtime_error(operation + ": " + message),
      code_(code),
      operation_(std::move(operation)),
      details_(std::move(details)) {}

}  // namespace mkinv
