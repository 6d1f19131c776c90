#include "plnmf/csr_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace plnmf {

void CsrMatrix::validate() const {
    if (rows < 0 || cols < 0) throw std::invalid_argument("CsrMatrix: negative dimension");
    if (static_cast<index_t>(row_ptr.size()) != rows + 1)
        throw std::invalid_argument("CsrMatrix: row_ptr length must be rows+1");
    if (row_ptr.front() != 0 || row_ptr.back() != nnz())
        throw std::invalid_argument("CsrMatrix: row_ptr must start at 0 and end at nnz");
    if (col_idx.size() != values.size())
        throw std::invalid_argument("CsrMatrix: col_idx and values lengths differ");
    for (index_t v = 0; v < rows; ++v) {
        if (row_ptr[v] > row_ptr[v + 1])
            throw std::invalid_argument("CsrMatrix: row_ptr must be non-decreasing");
        for (index_t e = row_ptr[v]; e < row_ptr[v + 1]; ++e) {
            if (col_idx[e] < 0 || col_idx[e] >= cols)
                throw std::invalid_argument("CsrMatrix: column index out of range");
            if (e > row_ptr[v] && col_idx[e] <= col_idx[e - 1])
                throw std::invalid_argument("CsrMatrix: column indices must be strictly increasing per row");
            if (!std::isfinite(values[e]) || values[e] < 0.0)
                throw std::invalid_argument("CsrMatrix: values must be finite and non-negative");
        }
    }
}

CsrMatrix transpose(const CsrMatrix& a) {
    CsrMatrix t;
    t.rows = a.cols;
    t.cols = a.rows;
    t.row_ptr.assign(a.cols + 1, 0);
    t.col_idx.resize(a.values.size());
    t.values.resize(a.values.size());

    for (index_t e = 0; e < a.nnz(); ++e) ++t.row_ptr[a.col_idx[e] + 1];
    for (index_t c = 0; c < a.cols; ++c) t.row_ptr[c + 1] += t.row_ptr[c];

    std::vector<index_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (index_t v = 0; v < a.rows; ++v) {
        for (index_t e = a.row_ptr[v]; e < a.row_ptr[v + 1]; ++e) {
            const index_t pos = cursor[a.col_idx[e]]++;
            t.col_idx[pos] = v;
            t.values[pos] = a.values[e];
        }
    }
    return t;
}

}  // namespace plnmf
