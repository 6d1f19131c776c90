#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

#include "plnmf/input_matrix.hpp"

namespace plnmf {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, index_t line, const std::string& what);
    index_t line() const { return line_; }

private:
    index_t line_ = 0;
};

// Matrix Market reader. "coordinate real general" and "coordinate pattern
// general" produce a CsrMatrix (1-based indices converted, duplicates summed,
// rows sorted); "array real general" produces a column-major DenseMatrix.
// Negative or non-finite values are rejected with the offending line number.
InputMatrix read_matrix_market(const std::string& path);
InputMatrix read_matrix_market(std::istream& in, const std::string& source_name);

// Reads only the banner and size line: (rows, cols).
std::pair<index_t, index_t> peek_matrix_market_shape(const std::string& path);

// Exact dense expansion, implicit zeros included.
DenseMatrix densify(const CsrMatrix& a);

}  // namespace plnmf
