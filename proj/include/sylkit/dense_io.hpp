#pragma once

#include <iosfwd>
#include <string>

#include "sylkit/dense.hpp"

namespace sylkit::la {

// Matrix Market "array real general" format, column-major body.
void write_matrix_market_array(const DenseMat& m, std::ostream& os);
void write_matrix_market_array(const DenseMat& m, const std::string& path);
DenseMat read_matrix_market_array(std::istream& is);
DenseMat read_matrix_market_array(const std::string& path);

// CSV: first line holds the dimensions as "rows,cols", then one matrix row
// per line.
void write_csv(const DenseMat& m, std::ostream& os);
void write_csv(const DenseMat& m, const std::string& path);
DenseMat read_csv(std::istream& is);
DenseMat read_csv(const std::string& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace sylkit::la
