#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mkinv/inversion.hpp"
#include "mkinv/quadrature.hpp"

namespace mkinv {

inline const std::vector<std::string>& run_commands() {
  static const std::vector<std::string> names{"decompose", "invert", "regularise", "mixture",
                                              "sweep",     "diagnose", "pde",      "check"};
  return names;
}

struct RunConfig {
  std::string command;
  /// Model file path or bundled model name.
  std::string model;
  std::optional<double> horizon;
  double alpha = 1.0;
  std::optional<double> gamma;
  std::optional<double> tStar;
  std::string phi = "tikhonov_exp";
  /// Parameters for the constant (c) and mixture (tau, default T) phi families.
  std::optional<double> phiC;
  std::optional<double> tau;
  /// Expression for g; `gCsv` reads `index,x,m,value` instead.
  std::string g;
  std::string gCsv;
  std::vector<double> gammas;
  int timeSteps = 20;
  std::string out = ".";
  std::uint64_t seed = 0;
  QuadratureConfig quadrature;
};

/// Exit codes of run().
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitValidation = 2, kExitNumerical = 3 };

/// Serialized with the fields lambdaMax, amplificationLog10,
/// membershipSpectralLog10, membershipQuadrature and flag.
nlohmann::json to_json(const ConditioningReport& report);

/// Runs one command and writes its artifacts into config.out. Errors are
/// written to error.json there and mapped to the exit code; nothing throws.
int run(const RunConfig& config, std::ostream& log);

}  // namespace mkinv
