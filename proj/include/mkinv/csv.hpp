#pragma once

#include <iosfwd>
#include <string>

#include "mkinv/space.hpp"

namespace mkinv {

/// Shortest round-trip decimal rendering (17 significant digits).
std::string format_double(double value);

/// Writes `index,x,m,value` rows, LF line endings.
void write_vector_csv(std::ostream& out, const WeightedStateSpace& space, const Vector& values);

/// Reads a file produced by write_vector_csv. The x column must match the
/// space's grid to 1e-12 relative; throws ParseError or LengthMismatch.
Vector read_vector_csv(std::istream& in, const WeightedStateSpace& space);

}  // namespace mkinv
