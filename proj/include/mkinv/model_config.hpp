#pragma once

#include <string>

#include <json.hpp>

#include "mkinv/generator.hpp"

namespace mkinv {

inline constexpr int kSchemaVersion = 1;

/// Builds a generator from a model document:
///
///   {"schemaVersion": 1, "type": "diffusion", "left": 0, "right": 1, "gridSize": 50,
///    "sigma": "1", "kill": "0", "leftBoundary": "neumann", "rightBoundary": "dirichlet"}
///   {"schemaVersion": 1, "type": "ou", "halfWidth": 6, "gridSize": 400, "r": 1}
///   {"schemaVersion": 1, "type": "jump", "points": [...], "weights": [...], "kernel": [[...], ...]}
///   {"schemaVersion": 1, "type": "jump", "left": -3, "right": 3, "gridSize": 41, "gaussianTStar": 1}
///   {"schemaVersion": 1, "type": "chain", "matrix": [[...], ...], "weights": [...]}
///   {"schemaVersion": 1, "type": "bundled", "name": "chain2"}
///
/// sigma and kill are expressions in x. Throws InvalidConfig for schema
/// problems and the builder errors otherwise.
SymmetricGenerator build_model(const nlohmann::json& doc);

/// Reads a model document from `source`, or treats `source` as a bundled
/// model name when no such file exists. Throws IoError / ParseError / InvalidConfig.
SymmetricGenerator load_model(const std::string& source);

}  // namespace mkinv
