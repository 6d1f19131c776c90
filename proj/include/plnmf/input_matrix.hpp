#pragma once

#include <variant>

#include "plnmf/csr_matrix.hpp"
#include "plnmf/dense_matrix.hpp"

namespace plnmf {

// The matrix being factorized: dense or CSR sparse, V x D.
class InputMatrix {
public:
    explicit InputMatrix(DenseMatrix m);
    explicit InputMatrix(CsrMatrix m);

    index_t rows() const;
    index_t cols() const;
    bool is_sparse() const { return std::holds_alternative<CsrMatrix>(m_); }

    const DenseMatrix& dense() const { return std::get<DenseMatrix>(m_); }
    const CsrMatrix& csr() const { return std::get<CsrMatrix>(m_); }

    // Count of explicitly stored nonzero entries.
    index_t nnz() const { return nnz_; }
    // Fraction of zero entries, in [0, 1].
    double sparsity() const;
    // Cached squared Frobenius norm.
    double norm_sq() const { return norm_sq_; }

private:
    std::variant<DenseMatrix, CsrMatrix> m_;
    index_t nnz_ = 0;
    double norm_sq_ = 0.0;
};

}  // namespace plnmf
