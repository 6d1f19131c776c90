#include "plnmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace plnmf {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Per-slice squared residuals land in a vector first and are summed serially,
// so the total is independent of the thread count.
double dense_residual_sq(const DenseMatrix& a, const DenseMatrix& w, const DenseMatrix& ht) {
    const index_t v_dim = a.rows();
    const index_t d_dim = a.cols();
    const index_t k_dim = w.cols();
    std::vector<double> per_col(d_dim, 0.0);
#pragma omp parallel
    {
        std::vector<double> wh(v_dim);
#pragma omp for schedule(static)
        for (index_t d = 0; d < d_dim; ++d) {
            std::fill(wh.begin(), wh.end(), 0.0);
            for (index_t k = 0; k < k_dim; ++k) {
                const double f = ht(d, k);
                const double* wc = w.col(k);
                for (index_t v = 0; v < v_dim; ++v) wh[v] += wc[v] * f;
            }
            const double* ac = a.col(d);
            double acc = 0.0;
            for (index_t v = 0; v < v_dim; ++v) {
                const double diff = ac[v] - wh[v];
                acc += diff * diff;
            }
            per_col[d] = acc;
        }
    }
    double total = 0.0;
    for (double x : per_col) total += x;
    return total;
}

double sparse_residual_sq(const CsrMatrix& a, const DenseMatrix& w, const DenseMatrix& ht) {
    const index_t v_dim = a.rows;
    const index_t d_dim = a.cols;
    const index_t k_dim = w.cols();
    std::vector<double> per_row(v_dim, 0.0);
#pragma omp parallel
    {
        std::vector<double> wh(d_dim);
#pragma omp for schedule(dynamic, 32)
        for (index_t v = 0; v < v_dim; ++v) {
            std::fill(wh.begin(), wh.end(), 0.0);
            for (index_t k = 0; k < k_dim; ++k) {
                const double f = w(v, k);
                const double* hc = ht.col(k);
                for (index_t d = 0; d < d_dim; ++d) wh[d] += hc[d] * f;
            }
            for (index_t e = a.row_ptr[v]; e < a.row_ptr[v + 1]; ++e)
                wh[a.col_idx[e]] -= a.values[e];
            double acc = 0.0;
            for (index_t d = 0; d < d_dim; ++d) acc += wh[d] * wh[d];
            per_row[v] = acc;
        }
    }
    double total = 0.0;
    for (double x : per_row) total += x;
    return total;
}

}  // namespace

ErrorReport relative_error_direct(const InputMatrix& a, const DenseMatrix& w,
                                  const DenseMatrix& ht) {
    require(w.rows() == a.rows() && ht.rows() == a.cols() && w.cols() == ht.cols(),
            "relative_error_direct: dimensions disagree");
    const double a2 = a.norm_sq();
    if (a2 == 0.0) throw std::domain_error("relative_error_direct: zero input matrix");

    ErrorReport rep;
    rep.a_norm_sq = a2;
    rep.frobenius_sq = a.is_sparse() ? sparse_residual_sq(a.csr(), w, ht)
                                     : dense_residual_sq(a.dense(), w, ht);
    rep.relative = std::sqrt(rep.frobenius_sq / a2);
    return rep;
}

ErrorReport relative_error_gram(double a_norm_sq, const DenseMatrix& w, const DenseMatrix& ht,
                                const DenseMatrix& p, const DenseMatrix& q,
                                const DenseMatrix& s) {
    require(p.rows() == w.rows() && p.cols() == w.cols(), "relative_error_gram: P shape mismatch");
    require(q.rows() == w.cols() && q.cols() == w.cols() && s.rows() == w.cols() &&
                s.cols() == w.cols() && ht.cols() == w.cols(),
            "relative_error_gram: Gram shape mismatch");
    if (a_norm_sq == 0.0) throw std::domain_error("relative_error_gram: zero input norm");

    double pw = 0.0;
    {
        const double* pp = p.data();
        const double* wp = w.data();
        const index_t n = p.size();
        for (index_t i = 0; i < n; ++i) pw += pp[i] * wp[i];
    }
    double sq = 0.0;
    {
        const double* sp = s.data();
        const double* qp = q.data();
        const index_t n = s.size();
        for (index_t i = 0; i < n; ++i) sq += sp[i] * qp[i];
    }

    ErrorReport rep;
    rep.a_norm_sq = a_norm_sq;
    rep.frobenius_sq = a_norm_sq - 2.0 * pw + sq;
    if (rep.frobenius_sq < 0.0) {
        rep.frobenius_sq = 0.0;
        rep.cancellation = true;
    }
    rep.relative = std::sqrt(rep.frobenius_sq / a_norm_sq);
    return rep;
}

double factor_deviation(const DenseMatrix& ref, const DenseMatrix& other) {
    require(ref.rows() == other.rows() && ref.cols() == other.cols(),
            "factor_deviation: dimensions disagree");
    double max_diff = 0.0;
    double max_ref = 0.0;
    const double* a = ref.data();
    const double* b = other.data();
    const index_t n = ref.size();
    for (index_t i = 0; i < n; ++i) {
        max_diff = std::max(max_diff, std::abs(a[i] - b[i]));
        max_ref = std::max(max_ref, std::abs(a[i]));
    }
    if (max_ref == 0.0) return max_diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return max_diff / max_ref;
}

}  // namespace plnmf
