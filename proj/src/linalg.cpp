#include "plnmf/linalg.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace plnmf {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

index_t view_extent(ConstMatrixView v) {
    if (v.rows == 0 || v.cols == 0) return 0;
    return (v.cols - 1) * v.stride + v.rows;
}

bool overlaps(ConstMatrixView a, ConstMatrixView b) {
    const double* a_end = a.data + view_extent(a);
    const double* b_end = b.data + view_extent(b);
    return a.data < b_end && b.data < a_end && view_extent(a) > 0 && view_extent(b) > 0;
}

// Inner-dimension block: keeps the streamed operand panel cache-resident
// without changing the per-element accumulation order.
constexpr index_t kInnerBlock = 256;

void scale_output(double beta, MatrixView c) {
    if (beta == 1.0) return;
#pragma omp parallel for schedule(static)
    for (index_t j = 0; j < c.cols; ++j) {
        double* col = c.col(j);
        if (beta == 0.0) {
            std::fill(col, col + c.rows, 0.0);
        } else {
            for (index_t i = 0; i < c.rows; ++i) col[i] *= beta;
        }
    }
}

// c += alpha * a * b
void accumulate_nn(double alpha, ConstMatrixView a, ConstMatrixView b, MatrixView c) {
    for (index_t k0 = 0; k0 < a.cols; k0 += kInnerBlock) {
        const index_t k1 = std::min(a.cols, k0 + kInnerBlock);
#pragma omp parallel for schedule(static)
        for (index_t j = 0; j < c.cols; ++j) {
            double* cc = c.col(j);
            for (index_t k = k0; k < k1; ++k) {
                const double f = alpha * b(k, j);
                const double* ac = a.col(k);
#pragma omp simd
                for (index_t i = 0; i < c.rows; ++i) cc[i] += f * ac[i];
            }
        }
    }
}

// c += alpha * a^T * b: every output element is a contiguous column dot.
void accumulate_tn(double alpha, ConstMatrixView a, ConstMatrixView b, MatrixView c) {
    const index_t kk = a.rows;
    constexpr index_t kColBlock = 48;
    for (index_t j0 = 0; j0 < c.cols; j0 += kColBlock) {
        const index_t j1 = std::min(c.cols, j0 + kColBlock);
#pragma omp parallel for schedule(static)
        for (index_t i = 0; i < c.rows; ++i) {
            const double* ac = a.col(i);
            for (index_t j = j0; j < j1; ++j) {
                const double* bc = b.col(j);
                double acc = 0.0;
#pragma omp simd reduction(+ : acc)
                for (index_t k = 0; k < kk; ++k) acc += ac[k] * bc[k];
                c(i, j) += alpha * acc;
            }
        }
    }
}

// c += alpha * a * b^T
void accumulate_nt(double alpha, ConstMatrixView a, ConstMatrixView b, MatrixView c) {
    for (index_t k0 = 0; k0 < a.cols; k0 += kInnerBlock) {
        const index_t k1 = std::min(a.cols, k0 + kInnerBlock);
#pragma omp parallel for schedule(static)
        for (index_t j = 0; j < c.cols; ++j) {
            double* cc = c.col(j);
            for (index_t k = k0; k < k1; ++k) {
                const double f = alpha * b(j, k);
                const double* ac = a.col(k);
#pragma omp simd
                for (index_t i = 0; i < c.rows; ++i) cc[i] += f * ac[i];
            }
        }
    }
}

// c += alpha * a^T * b^T
void accumulate_tt(double alpha, ConstMatrixView a, ConstMatrixView b, MatrixView c) {
    const index_t kk = a.rows;
#pragma omp parallel for schedule(static)
    for (index_t j = 0; j < c.cols; ++j) {
        for (index_t i = 0; i < c.rows; ++i) {
            const double* ac = a.col(i);
            double acc = 0.0;
            for (index_t k = 0; k < kk; ++k) acc += ac[k] * b(j, k);
            c(i, j) += alpha * acc;
        }
    }
}

}  // namespace

void gemm(double alpha, ConstMatrixView a, bool transpose_a,
          ConstMatrixView b, bool transpose_b,
          double beta, MatrixView c) {
    const index_t m = transpose_a ? a.cols : a.rows;
    const index_t ka = transpose_a ? a.rows : a.cols;
    const index_t kb = transpose_b ? b.cols : b.rows;
    const index_t n = transpose_b ? b.rows : b.cols;
    require(ka == kb, "gemm: inner dimensions disagree");
    require(c.rows == m && c.cols == n, "gemm: output dimensions disagree");
    require(!overlaps(c, a) && !overlaps(c, b), "gemm: output aliases an input");

    scale_output(beta, c);
    if (alpha == 0.0 || ka == 0) return;

    if (!transpose_a && !transpose_b) {
        accumulate_nn(alpha, a, b, c);
    } else if (transpose_a && !transpose_b) {
        accumulate_tn(alpha, a, b, c);
    } else if (!transpose_a && transpose_b) {
        accumulate_nt(alpha, a, b, c);
    } else {
        accumulate_tt(alpha, a, b, c);
    }
}

void spmm_into(const CsrMatrix& a, const DenseMatrix& x, DenseMatrix& y) {
    require(a.cols == x.rows(), "spmm: dimensions disagree");
    require(y.rows() == a.rows && y.cols() == x.cols(), "spmm: output dimensions disagree");
    const index_t n = x.cols();
#pragma omp parallel for schedule(dynamic, 64)
    for (index_t v = 0; v < a.rows; ++v) {
        const index_t e0 = a.row_ptr[v];
        const index_t e1 = a.row_ptr[v + 1];
        for (index_t j = 0; j < n; ++j) {
            const double* xc = x.col(j);
            double acc = 0.0;
            for (index_t e = e0; e < e1; ++e) acc += a.values[e] * xc[a.col_idx[e]];
            y(v, j) = acc;
        }
    }
}

DenseMatrix spmm(const CsrMatrix& a, bool transpose_a, const DenseMatrix& x) {
    if (transpose_a) {
        const CsrMatrix at = transpose(a);
        DenseMatrix y(at.rows, x.cols());
        spmm_into(at, x, y);
        return y;
    }
    DenseMatrix y(a.rows, x.cols());
    spmm_into(a, x, y);
    return y;
}

void gram_into(const DenseMatrix& m, DenseMatrix& g) {
    const index_t k_dim = m.cols();
    const index_t n = m.rows();
    require(g.rows() == k_dim && g.cols() == k_dim, "gram: output dimensions disagree");
    g.set_zero();

    const index_t n_pairs = k_dim * (k_dim + 1) / 2;
    std::vector<index_t> pk(n_pairs), pl(n_pairs);
    {
        index_t p = 0;
        for (index_t k = 0; k < k_dim; ++k)
            for (index_t l = k; l < k_dim; ++l) {
                pk[p] = k;
                pl[p] = l;
                ++p;
            }
    }

    // Row blocks keep the m panel cache-resident; each (k,l) entry still
    // accumulates in ascending row order.
    constexpr index_t kRowBlock = 2048;
    for (index_t v0 = 0; v0 < n; v0 += kRowBlock) {
        const index_t v1 = std::min(n, v0 + kRowBlock);
#pragma omp parallel for schedule(static)
        for (index_t p = 0; p < n_pairs; ++p) {
            const double* ca = m.col(pk[p]);
            const double* cb = m.col(pl[p]);
            double acc = 0.0;
#pragma omp simd reduction(+ : acc)
            for (index_t v = v0; v < v1; ++v) acc += ca[v] * cb[v];
            g(pk[p], pl[p]) += acc;
        }
    }

    for (index_t k = 0; k < k_dim; ++k)
        for (index_t l = k + 1; l < k_dim; ++l) g(l, k) = g(k, l);
}

DenseMatrix gram(const DenseMatrix& m) {
    DenseMatrix g(m.cols(), m.cols());
    gram_into(m, g);
    return g;
}

}  // namespace plnmf
