#pragma once

#include <vector>

#include "plnmf/config.hpp"
#include "plnmf/input_matrix.hpp"
#include "plnmf/tiling.hpp"
#include "plnmf/workspace.hpp"

namespace plnmf {

struct TraceRecord {
    index_t iteration = 0;  // 1-based outer iteration
    double rel_error = 0;
    double elapsed_s = 0;   // cumulative wall time, objective evaluation excluded from phases
    PhaseTimes phases;      // this iteration's phase breakdown
};

struct ConvergenceTrace {
    double initial_error = 0;  // relative error of the factors before iteration 1
    std::vector<TraceRecord> records;
    PhaseTimes totals;
    double total_seconds = 0;
    std::uint64_t update_macs = 0;
};

// W and Ht filled i.i.d. uniform on [epsilon, 1), a deterministic function of
// config.seed. Columns are not pre-normalized; the first W update normalizes.
FactorPair init_factors(index_t v, index_t d, const SolverConfig& config);

// Runs up to max_iters outer iterations (H update then W update), evaluating
// the relative objective every error_every iterations and stopping early when
// its relative change drops below rel_tol. Throws if the objective becomes
// non-finite. For Algorithm::tiled, config.tile_size must be in [1, rank].
ConvergenceTrace iterate(const InputMatrix& a, FactorPair& factors,
                         const SolverConfig& config, Algorithm algorithm);

}  // namespace plnmf
