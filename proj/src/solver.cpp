#include "plnmf/solver.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "plnmf/hals.hpp"
#include "plnmf/linalg.hpp"
#include "plnmf/metrics.hpp"
#include "plnmf/tiled.hpp"
#include "stopwatch.hpp"

namespace plnmf {

namespace {

// mt19937_64 output mapped to [0, 1) directly; avoids distribution objects so
// the stream is identical across standard library implementations.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fill_uniform(DenseMatrix& m, std::mt19937_64& rng, double lo) {
    double* p = m.data();
    const index_t n = m.size();
    for (index_t i = 0; i < n; ++i) p[i] = lo + (1.0 - lo) * next_uniform(rng);
}

// Gram-identity error against the current factors; falls back to the direct
// path when cancellation makes the fast path unreliable.
ErrorReport evaluate_error(const InputMatrix& a, const FactorPair& f, UpdateWorkspace& ws) {
    Stopwatch sw;
    gram_into(f.w, ws.s);
    ErrorReport rep = relative_error_gram(a.norm_sq(), f.w, f.ht, ws.p, ws.q, ws.s);
    if (rep.relative < 1e-6) rep = relative_error_direct(a, f.w, f.ht);
    ws.phase_times.error_eval += sw.seconds();
    return rep;
}

}  // namespace

FactorPair init_factors(index_t v, index_t d, const SolverConfig& config) {
    config.validate();
    if (v < 1 || d < 1) throw std::invalid_argument("init_factors: dimensions must be >= 1");
    std::mt19937_64 rng(config.seed);
    FactorPair f{DenseMatrix(v, config.rank), DenseMatrix(d, config.rank)};
    fill_uniform(f.w, rng, config.epsilon);
    fill_uniform(f.ht, rng, config.epsilon);
    return f;
}

ConvergenceTrace iterate(const InputMatrix& a, FactorPair& factors,
                         const SolverConfig& config, Algorithm algorithm) {
    config.validate();
    const index_t v = a.rows();
    const index_t d = a.cols();
    const index_t k = config.rank;
    if (factors.w.rows() != v || factors.w.cols() != k || factors.ht.rows() != d ||
        factors.ht.cols() != k)
        throw std::invalid_argument("iterate: factor dimensions do not match input and rank");

    TilingPlan plan;
    if (algorithm == Algorithm::tiled) {
        if (config.tile_size < 1 || config.tile_size > k)
            throw std::invalid_argument("iterate: tiled algorithm needs tile_size in [1, rank]");
        plan = plan_tiles(k, config.tile_size);
    }

    UpdateWorkspace ws(v, d, k);
    ConvergenceTrace trace;
    Stopwatch total_sw;

    // Error of the initial factors, before any update.
    precompute_w_products(a, factors.ht, ws);
    trace.initial_error = evaluate_error(a, factors, ws).relative;
    double prev_error = trace.initial_error;

    for (index_t it = 1; it <= config.max_iters; ++it) {
        const PhaseTimes before = ws.phase_times;

        precompute_h_products(a, factors.w, ws);
        if (algorithm == Algorithm::tiled)
            update_h_tiled(factors, ws, plan, config);
        else
            update_h_reference(factors, ws, config);

        precompute_w_products(a, factors.ht, ws);
        if (algorithm == Algorithm::tiled)
            update_w_tiled(factors, ws, plan, config);
        else
            update_w_reference(factors, ws, config);

        if (it % config.error_every == 0) {
            const ErrorReport rep = evaluate_error(a, factors, ws);
            if (!std::isfinite(rep.relative))
                throw std::runtime_error("iterate: objective became non-finite at iteration " +
                                         std::to_string(it));
            trace.records.push_back(
                {it, rep.relative, total_sw.seconds(), ws.phase_times - before});

            if (prev_error > 0.0 &&
                std::abs(prev_error - rep.relative) / prev_error < config.rel_tol) {
                prev_error = rep.relative;
                break;
            }
            prev_error = rep.relative;
        }
    }

    trace.totals = ws.phase_times;
    trace.total_seconds = total_sw.seconds();
    trace.update_macs = ws.update_macs;
    return trace;
}

}  // namespace plnmf
