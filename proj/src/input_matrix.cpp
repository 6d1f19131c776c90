#include "plnmf/input_matrix.hpp"

namespace plnmf {

InputMatrix::InputMatrix(DenseMatrix m) : m_(std::move(m)) {
    const DenseMatrix& d = dense();
    const double* p = d.data();
    const index_t n = d.size();
    for (index_t i = 0; i < n; ++i) {
        norm_sq_ += p[i] * p[i];
        if (p[i] != 0.0) ++nnz_;
    }
}

InputMatrix::InputMatrix(CsrMatrix m) : m_(std::move(m)) {
    const CsrMatrix& c = csr();
    c.validate();
    nnz_ = c.nnz();
    for (double v : c.values) norm_sq_ += v * v;
}

index_t InputMatrix::rows() const {
    return is_sparse() ? csr().rows : dense().rows();
}

index_t InputMatrix::cols() const {
    return is_sparse() ? csr().cols : dense().cols();
}

double InputMatrix::sparsity() const {
    const double cells = static_cast<double>(rows()) * static_cast<double>(cols());
    if (cells == 0.0) return 0.0;
    return 1.0 - static_cast<double>(nnz_) / cells;
}

}  // namespace plnmf
