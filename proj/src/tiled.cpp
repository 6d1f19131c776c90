#include "plnmf/tiled.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "plnmf/linalg.hpp"
#include "stopwatch.hpp"

namespace plnmf {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_plan(const TilingPlan& plan, index_t k_dim) {
    require(!plan.tiles.empty() && plan.tiles.front().begin == 0 && plan.tiles.back().end == k_dim,
            "tiled update: plan does not cover the factor columns");
}

}  // namespace

void init_new_accumulator(const DenseMatrix& old_mat, const DenseMatrix& diag_src,
                          DenseMatrix& new_buf, bool use_diag, UpdateWorkspace& ws) {
    const index_t n = old_mat.rows();
    const index_t k_dim = old_mat.cols();
    require(new_buf.rows() == n && new_buf.cols() == k_dim,
            "init_new_accumulator: buffer shape mismatch");
    require(diag_src.rows() == k_dim && diag_src.cols() == k_dim,
            "init_new_accumulator: diagonal source shape mismatch");

#pragma omp parallel for schedule(static)
    for (index_t k = 0; k < k_dim; ++k) {
        const double* src = old_mat.col(k);
        double* dst = new_buf.col(k);
        if (use_diag) {
            const double dkk = diag_src(k, k);
#pragma omp simd
            for (index_t i = 0; i < n; ++i) dst[i] = src[i] * dkk;
        } else {
            std::memcpy(dst, src, sizeof(double) * static_cast<std::size_t>(n));
        }
    }
    if (use_diag) ws.update_macs += static_cast<std::uint64_t>(n) * k_dim;
}

void phase1_left_contributions(const DenseMatrix& old_mat, const DenseMatrix& coeff,
                               const TilingPlan& plan, DenseMatrix& new_buf,
                               UpdateWorkspace& ws) {
    check_plan(plan, old_mat.cols());
    Stopwatch sw;
    for (index_t tau = 1; tau < plan.gamma(); ++tau) {
        const auto [b, e] = plan.tiles[tau];
        gemm(-1.0, old_mat.col_panel(b, e), false,
             coeff.block(b, e, 0, b), false,
             1.0, new_buf.col_panel(0, b));
        ws.update_macs += static_cast<std::uint64_t>(old_mat.rows()) * (e - b) * b;
    }
    ws.phase_times.phase1 += sw.seconds();
}

void phase2_in_tile(const DenseMatrix& old_mat, DenseMatrix& new_buf,
                    const DenseMatrix& coeff, const DenseMatrix& additive,
                    const TilingPlan& plan, index_t tile_idx, bool normalize,
                    const SolverConfig& config, UpdateWorkspace& ws) {
    const index_t n = new_buf.rows();
    const index_t k_dim = new_buf.cols();
    check_plan(plan, k_dim);
    require(tile_idx >= 0 && tile_idx < plan.gamma(), "phase2_in_tile: tile index out of range");
    require(old_mat.rows() == n && old_mat.cols() == k_dim &&
                additive.rows() == n && additive.cols() == k_dim &&
                coeff.rows() == k_dim && coeff.cols() == k_dim,
            "phase2_in_tile: shape mismatch");
    require(static_cast<index_t>(ws.scratch.size()) >= n, "phase2_in_tile: scratch too small");

    const auto [b, e] = plan.tiles[tile_idx];
    const double eps = config.epsilon;
    double* scratch = ws.scratch.data();

    const int max_threads = omp_get_max_threads();
    if (static_cast<int>(ws.reduce_partials.size()) < max_threads)
        ws.reduce_partials.resize(max_threads, 0.0);
    double* partials = ws.reduce_partials.data();

    Stopwatch sw;
    double norm_seconds = 0.0;
    for (index_t t = b; t < e; ++t) {
        const double* coeff_col = coeff.col(t);  // coeff is symmetric: (k,t) == (t,k)
        const double* add_col = additive.col(t);
        double* new_col = new_buf.col(t);

        // Rows are partitioned disjointly; each row's coefficient sum runs in
        // ascending k order and the norm partials combine in thread-id order,
        // so a fixed thread count reproduces bit-identical results.
#pragma omp parallel
        {
            const int tid = omp_get_thread_num();
            const int nth = omp_get_num_threads();
            const index_t chunk = (n + nth - 1) / nth;
            const index_t v0 = std::min<index_t>(n, static_cast<index_t>(tid) * chunk);
            const index_t v1 = std::min<index_t>(n, v0 + chunk);

            for (index_t v = v0; v < v1; ++v) scratch[v] = 0.0;
            for (index_t k = b; k < t; ++k) {
                const double f = coeff_col[k];
                const double* src = new_buf.col(k);
#pragma omp simd
                for (index_t v = v0; v < v1; ++v) scratch[v] += src[v] * f;
            }
            for (index_t k = t; k < e; ++k) {
                const double f = coeff_col[k];
                const double* src = old_mat.col(k);
#pragma omp simd
                for (index_t v = v0; v < v1; ++v) scratch[v] += src[v] * f;
            }

            if (normalize) {
                double local_ss = 0.0;
                for (index_t v = v0; v < v1; ++v) {
                    const double val = std::max(eps, new_col[v] + add_col[v] - scratch[v]);
                    new_col[v] = val;
                    local_ss += val * val;
                }
                partials[tid] = local_ss;
            } else {
                for (index_t v = v0; v < v1; ++v)
                    new_col[v] = std::max(eps, new_col[v] + add_col[v] - scratch[v]);
            }
        }

        if (normalize) {
            Stopwatch norm_sw;
            double sum_square = 0.0;
            for (int i = 0; i < max_threads; ++i) {
                sum_square += partials[i];
                partials[i] = 0.0;
            }
            const double norm = std::sqrt(sum_square);
            ws.column_norms[t] = norm;
#pragma omp parallel for schedule(static)
            for (index_t v = 0; v < n; ++v) new_col[v] = std::max(eps, new_col[v] / norm);
            norm_seconds += norm_sw.seconds();
        }
    }

    const index_t width = e - b;
    ws.update_macs += static_cast<std::uint64_t>(n) * width * width;
    if (normalize) ws.update_macs += 2ull * n * width;
    ws.phase_times.normalize += norm_seconds;
    ws.phase_times.phase2 += sw.seconds() - norm_seconds;
}

void phase3_right_contributions(DenseMatrix& new_buf, const DenseMatrix& coeff,
                                const TilingPlan& plan, index_t tile_idx,
                                UpdateWorkspace& ws) {
    const index_t k_dim = new_buf.cols();
    check_plan(plan, k_dim);
    require(tile_idx >= 0 && tile_idx < plan.gamma(),
            "phase3_right_contributions: tile index out of range");
    const auto [b, e] = plan.tiles[tile_idx];
    if (e >= k_dim) return;

    Stopwatch sw;
    gemm(-1.0, new_buf.col_panel(b, e), false,
         coeff.block(b, e, e, k_dim), false,
         1.0, new_buf.col_panel(e, k_dim));
    ws.update_macs += static_cast<std::uint64_t>(new_buf.rows()) * (e - b) * (k_dim - e);
    ws.phase_times.phase3 += sw.seconds();
}

void update_w_tiled(FactorPair& factors, UpdateWorkspace& ws, const TilingPlan& plan,
                    const SolverConfig& config) {
    DenseMatrix& w = factors.w;
    check_plan(plan, w.cols());
    require(ws.w_new.rows() == w.rows() && ws.w_new.cols() == w.cols(),
            "update_w_tiled: buffer shape mismatch");

    Stopwatch init_sw;
    init_new_accumulator(w, ws.q, ws.w_new, true, ws);
    ws.phase_times.phase1 += init_sw.seconds();

    phase1_left_contributions(w, ws.q, plan, ws.w_new, ws);
    for (index_t tau = 0; tau < plan.gamma(); ++tau) {
        phase2_in_tile(w, ws.w_new, ws.q, ws.p, plan, tau, true, config, ws);
        phase3_right_contributions(ws.w_new, ws.q, plan, tau, ws);
    }
    w.swap(ws.w_new);
}

void update_h_tiled(FactorPair& factors, UpdateWorkspace& ws, const TilingPlan& plan,
                    const SolverConfig& config) {
    DenseMatrix& ht = factors.ht;
    check_plan(plan, ht.cols());
    require(ws.h_new.rows() == ht.rows() && ws.h_new.cols() == ht.cols(),
            "update_h_tiled: buffer shape mismatch");

    // new = old here (no diagonal scaling): the in-tile k = t term then
    // subtracts old_t * S_tt, staying faithful even when S_tt != 1.
    Stopwatch init_sw;
    init_new_accumulator(ht, ws.s, ws.h_new, false, ws);
    ws.phase_times.phase1 += init_sw.seconds();

    phase1_left_contributions(ht, ws.s, plan, ws.h_new, ws);
    for (index_t tau = 0; tau < plan.gamma(); ++tau) {
        phase2_in_tile(ht, ws.h_new, ws.s, ws.r, plan, tau, false, config, ws);
        phase3_right_contributions(ws.h_new, ws.s, plan, tau, ws);
    }
    ht.swap(ws.h_new);
}

}  // namespace plnmf
