#pragma once

#include <vector>

#include "plnmf/dense_matrix.hpp"

namespace plnmf {

// Compressed sparse row storage for the non-negative input matrix.
struct CsrMatrix {
    index_t rows = 0;
    index_t cols = 0;
    std::vector<index_t> row_ptr;  // length rows+1, non-decreasing, row_ptr[rows] == nnz
    std::vector<index_t> col_idx;  // strictly increasing within each row
    std::vector<double> values;    // finite, >= 0

    index_t nnz() const { return static_cast<index_t>(values.size()); }

    // Throws std::invalid_argument when any structural invariant is broken.
    void validate() const;
};

CsrMatrix transpose(const CsrMatrix& a);

}  // namespace plnmf
