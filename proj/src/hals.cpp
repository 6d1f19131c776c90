#include "plnmf/hals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plnmf/linalg.hpp"
#include "stopwatch.hpp"

namespace plnmf {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void precompute_h_products(const InputMatrix& a, const DenseMatrix& w, UpdateWorkspace& ws) {
    require(w.rows() == a.rows(), "precompute_h_products: W rows must match A rows");
    require(ws.r.rows() == a.cols() && ws.r.cols() == w.cols(),
            "precompute_h_products: workspace shape mismatch");
    Stopwatch sw;
    if (a.is_sparse()) {
        if (!ws.at) ws.at = transpose(a.csr());
        spmm_into(*ws.at, w, ws.r);
    } else {
        gemm(1.0, a.dense().view(), true, w.view(), false, 0.0, ws.r.view());
    }
    gram_into(w, ws.s);
    ws.phase_times.precompute_h += sw.seconds();
}

void precompute_w_products(const InputMatrix& a, const DenseMatrix& ht, UpdateWorkspace& ws) {
    require(ht.rows() == a.cols(), "precompute_w_products: Ht rows must match A cols");
    require(ws.p.rows() == a.rows() && ws.p.cols() == ht.cols(),
            "precompute_w_products: workspace shape mismatch");
    Stopwatch sw;
    if (a.is_sparse()) {
        spmm_into(a.csr(), ht, ws.p);
    } else {
        gemm(1.0, a.dense().view(), false, ht.view(), false, 0.0, ws.p.view());
    }
    gram_into(ht, ws.q);
    ws.phase_times.precompute_w += sw.seconds();
}

// H_k <- max(eps, H_k + R_k - H^T S_k), columns of Ht swept left to right so
// column k sees updated columns j < k and old columns j >= k.
void update_h_reference(FactorPair& factors, UpdateWorkspace& ws, const SolverConfig& config) {
    DenseMatrix& ht = factors.ht;
    const index_t d = ht.rows();
    const index_t k_dim = ht.cols();
    require(ws.r.rows() == d && ws.r.cols() == k_dim && ws.s.rows() == k_dim,
            "update_h_reference: workspace shape mismatch");
    const double eps = config.epsilon;

    Stopwatch sw;
    for (index_t k = 0; k < k_dim; ++k) {
        const double* s_col = ws.s.col(k);
        const double* r_col = ws.r.col(k);
        double* h_col = ht.col(k);
        for (index_t row = 0; row < d; ++row) {
            double dot = 0.0;
            for (index_t j = 0; j < k_dim; ++j) dot += ht(row, j) * s_col[j];
            h_col[row] = std::max(eps, h_col[row] + r_col[row] - dot);
        }
    }
    ws.update_macs += static_cast<std::uint64_t>(d) * k_dim * k_dim;
    ws.phase_times.update_h += sw.seconds();
}

// W_k <- max(eps, W_k*Q_kk + P_k - W*Q_k), then the column is L2-normalized
// before column k+1 reads it. The epsilon floor is re-applied after the
// division so no normalization can push an entry below it.
void update_w_reference(FactorPair& factors, UpdateWorkspace& ws, const SolverConfig& config) {
    DenseMatrix& w = factors.w;
    const index_t v_dim = w.rows();
    const index_t k_dim = w.cols();
    require(ws.p.rows() == v_dim && ws.p.cols() == k_dim && ws.q.rows() == k_dim,
            "update_w_reference: workspace shape mismatch");
    const double eps = config.epsilon;

    Stopwatch sw;
    double norm_seconds = 0.0;
    for (index_t k = 0; k < k_dim; ++k) {
        const double qkk = ws.q(k, k);
        const double* q_col = ws.q.col(k);
        const double* p_col = ws.p.col(k);
        double* w_col = w.col(k);
        for (index_t v = 0; v < v_dim; ++v) {
            double dot = 0.0;
            for (index_t j = 0; j < k_dim; ++j) dot += w(v, j) * q_col[j];
            w_col[v] = std::max(eps, w_col[v] * qkk + p_col[v] - dot);
        }
        Stopwatch norm_sw;
        double sum_square = 0.0;
        for (index_t v = 0; v < v_dim; ++v) sum_square += w_col[v] * w_col[v];
        const double norm = std::sqrt(sum_square);
        ws.column_norms[k] = norm;
        for (index_t v = 0; v < v_dim; ++v) w_col[v] = std::max(eps, w_col[v] / norm);
        norm_seconds += norm_sw.seconds();
    }
    ws.update_macs += static_cast<std::uint64_t>(v_dim) * k_dim * (k_dim + 3);
    ws.phase_times.normalize += norm_seconds;
    ws.phase_times.update_w += sw.seconds() - norm_seconds;
}

}  // namespace plnmf
