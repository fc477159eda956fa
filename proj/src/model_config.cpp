#include "mkinv/model_config.hpp"

#include <filesystem>
#include <fstream>
#include <memory>

#include "mkinv/error.hpp"
#include "mkinv/expression.hpp"
#include "mkinv/models.hpp"

namespace mkinv {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "build_model", what);
}

const json& field(const json& doc, const char* key) {
  if (!doc.contains(key)) invalid(std::string("missing field '") + key + "'");
  return doc.at(key);
}

double number(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number()) invalid(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& doc, const char* key, double fallback) {
  return doc.contains(key) ? number(doc, key) : fallback;
}

int count(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number_integer()) invalid(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

Vector vector_field(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_array()) invalid(std::string("field '") + key + "' must be an array of numbers");
  Vector out(Eigen::Index(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) invalid(std::string("field '") + key + "' must be an array of numbers");
    out[Eigen::Index(i)] = v[i].get<double>();
  }
  return out;
}

Matrix matrix_field(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_array() || v.empty()) invalid(std::string("field '") + key + "' must be a non-empty array of rows");
  const size_t cols = v[0].is_array() ? v[0].size() : 0;
  Matrix out(Eigen::Index(v.size()), Eigen::Index(cols));
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != cols) invalid(std::string("field '") + key + "' rows must have equal length");
    for (size_t j = 0; j < cols; ++j) {
      if (!v[i][j].is_number()) invalid(std::string("field '") + key + "' entries must be numbers");
      out(Eigen::Index(i), Eigen::Index(j)) = v[i][j].get<double>();
    }
  }
  return out;
}

ScalarFn expression_field(const json& doc, const char* key, const char* fallback) {
  std::string source = fallback;
  if (doc.contains(key)) {
    const json& v = doc.at(key);
    if (v.is_number()) {
      const double c = v.get<double>();
      return [c](double) { return c; };
    }
    if (!v.is_string()) invalid(std::string("field '") + key + "' must be a number or an expression string");
    source = v.get<std::string>();
  }
  auto expr = std::make_shared<Expression>(source);
  if (expr->grid_only()) invalid(std::string("field '") + key + "' cannot use random or mode");
  return [expr](double x) { return (*expr)(x); };
}

Boundary boundary_field(const json& doc, const char* key) {
  if (!doc.contains(key)) return Boundary::Neumann;
  const json& v = doc.at(key);
  if (v == "neumann") return Boundary::Neumann;
  if (v == "dirichlet") return Boundary::Dirichlet;
  throw Error(ErrorCode::InvalidBoundary, "build_model", std::string("field '") + key + "' must be neumann or dirichlet");
}

WeightedStateSpace jump_space(const json& doc) {
  if (doc.contains("points")) return WeightedStateSpace(vector_field(doc, "points"), vector_field(doc, "weights"));
  const double left = number(doc, "left");
  const double right = number(doc, "right");
  const int n = count(doc, "gridSize");
  if (n < 2 || !(left < right)) invalid("jump grid needs left < right and gridSize >= 2");
  const double h = (right - left) / (n - 1);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = left + h * i;
  return WeightedStateSpace(x, Vector::Constant(n, h));
}

}  // namespace

SymmetricGenerator build_model(const json& doc) {
  if (!doc.is_object()) invalid("model document must be a JSON object");
  if (!doc.contains("schemaVersion") || doc.at("schemaVersion") != kSchemaVersion) {
    invalid("schemaVersion must be " + std::to_string(kSchemaVersion));
  }
  const json& type = field(doc, "type");
  if (!type.is_string()) invalid("field 'type' must be a string");
  const std::string kind = type.get<std::string>();

  if (kind == "diffusion") {
    DiffusionSpec spec;
    spec.left = number(doc, "left");
    spec.right = number(doc, "right");
    spec.gridSize = count(doc, "gridSize");
    spec.sigma = expression_field(doc, "sigma", "1");
    spec.kill = expression_field(doc, "kill", "0");
    spec.leftBoundary = boundary_field(doc, "leftBoundary");
    spec.rightBoundary = boundary_field(doc, "rightBoundary");
    return build_diffusion(spec);
  }
  if (kind == "ou") return build_ou(number_or(doc, "halfWidth", 6.0), count(doc, "gridSize"), number(doc, "r"));
  if (kind == "jump") {
    WeightedStateSpace space = jump_space(doc);
    Matrix kernel = doc.contains("kernel") ? matrix_field(doc, "kernel")
                                           : gaussian_jump_kernel(space, number(doc, "gaussianTStar"));
    return build_jump({std::move(space), std::move(kernel), number_or(doc, "rowTol", 1e-12)});
  }
  if (kind == "chain") return build_chain(matrix_field(doc, "matrix"), vector_field(doc, "weights"));
  if (kind == "bundled") {
    const json& name = field(doc, "name");
    if (!name.is_string()) invalid("field 'name' must be a string");
    return bundled_model(name.get<std::string>());
  }
  invalid("unknown model type '" + kind + "'");
}

SymmetricGenerator load_model(const std::string& source) {
  if (!std::filesystem::exists(source)) {
    for (const auto& name : bundled_model_names()) {
      if (name == source) return bundled_model(name);
    }
    throw Error(ErrorCode::IoError, "load_model", "no model file or bundled model named '" + source + "'");
  }
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::IoError, "load_model", "cannot open '" + source + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "load_model", std::string("invalid JSON: ") + e.what(),
                {{"position", double(e.byte)}});
  }
  return build_model(doc);
}

}  // namespace mkinv
