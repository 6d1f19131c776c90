#pragma once

#include "plnmf/csr_matrix.hpp"
#include "plnmf/dense_matrix.hpp"

namespace plnmf {

// c := alpha * op(a) * op(b) + beta * c.
// beta == 0 overwrites c without reading it. c must not alias a or b.
// The reduction over the inner dimension is performed in ascending index order
// for every output element, so results are run-to-run identical for any
// thread count.
void gemm(double alpha, ConstMatrixView a, bool transpose_a,
          ConstMatrixView b, bool transpose_b,
          double beta, MatrixView c);

// y := a * x (no transpose).
void spmm_into(const CsrMatrix& a, const DenseMatrix& x, DenseMatrix& y);

// op(a) * x. transpose_a builds the transposed CSR internally; callers on a
// hot path should transpose once and use spmm_into.
DenseMatrix spmm(const CsrMatrix& a, bool transpose_a, const DenseMatrix& x);

// g := m^T * m. One triangle is computed and mirrored, so g is exactly
// symmetric.
void gram_into(const DenseMatrix& m, DenseMatrix& g);
DenseMatrix gram(const DenseMatrix& m);

}  // namespace plnmf
