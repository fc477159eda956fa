#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mkinv/spectral.hpp"

namespace mkinv {

enum class CheckStatus { Pass, Fail, Skip };

const char* to_string(CheckStatus status);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Skip;
  /// Measured quantity compared against `threshold`.
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct InvariantOptions {
  double horizon = 1.0;
  std::uint64_t seed = 0;
};

/// Runs every library invariant that applies to the model and reports each
/// one. Checks whose preconditions fail (overflow, large spectra) are skipped
/// with a note instead of failing.
std::vector<CheckResult> run_invariant_suite(const SpectralDecomposition& dec, const InvariantOptions& options = {});

}  // namespace mkinv
