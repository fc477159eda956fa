#include "mkinv/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "mkinv/error.hpp"

namespace mkinv {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_vector_csv(std::ostream& out, const WeightedStateSpace& space, const Vector& values) {
  if (values.size() != space.size()) {
    throw Error(ErrorCode::LengthMismatch, "write_vector_csv", "vector length does not match the state space");
  }
  out << "index,x,m,value\n";
  for (Eigen::Index i = 0; i < space.size(); ++i) {
    out << i << ',' << format_double(space.points()[i]) << ',' << format_double(space.weights()[i])
        << ',' << format_double(values[i]) << '\n';
  }
}

Vector read_vector_csv(std::istream& in, const WeightedStateSpace& space) {
  std::string line;
  if (!std::getline(in, line) || line != "index,x,m,value") {
    throw Error(ErrorCode::ParseError, "read_vector_csv", "expected header 'index,x,m,value'");
  }
  Vector out(space.size());
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= space.size()) {
      throw Error(ErrorCode::LengthMismatch, "read_vector_csv", "more rows than grid points");
    }
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        fields.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "read_vector_csv",
                    "bad number '" + cell + "' on row " + std::to_string(row + 1));
      }
    }
    if (fields.size() != 4 || fields[0] != double(row)) {
      throw Error(ErrorCode::ParseError, "read_vector_csv", "malformed row " + std::to_string(row + 1));
    }
    const double x = space.points()[row];
    if (std::abs(fields[1] - x) > 1e-12 * std::max(1.0, std::abs(x))) {
      throw Error(ErrorCode::ParseError, "read_vector_csv",
                  "grid location on row " + std::to_string(row + 1) + " does not match the model");
    }
    out[row++] = fields[3];
  }
  if (row != space.size()) {
    throw Error(ErrorCode::LengthMismatch, "read_vector_csv", "fewer rows than grid points",
                {{"rows", double(row)}, {"expected", double(space.size())}});
  }
  return out;
}

}  // namespace mkinv
