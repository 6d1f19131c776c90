#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "plnmf/csr_matrix.hpp"
#include "plnmf/dense_matrix.hpp"

namespace plnmf {

// Wall-time buckets, in seconds. The reference path fills update_h/update_w;
// the tiled path splits its updates into phase1/phase2/phase3/normalize.
// Buckets are disjoint.
struct PhaseTimes {
    double precompute_h = 0;
    double update_h = 0;
    double precompute_w = 0;
    double update_w = 0;
    double phase1 = 0;
    double phase2 = 0;
    double phase3 = 0;
    double normalize = 0;
    double error_eval = 0;

    PhaseTimes& operator+=(const PhaseTimes& o);
    PhaseTimes operator-(const PhaseTimes& o) const;
};

// W is V x K; H is kept transposed as Ht (D x K) so both factors share the
// same column-panel update code path.
struct FactorPair {
    DenseMatrix w;
    DenseMatrix ht;
};

// Per-run scratch state: the precomputed products of one outer iteration,
// the double buffers the tiled updates write into, and instrumentation.
struct UpdateWorkspace {
    UpdateWorkspace(index_t v, index_t d, index_t k);

    DenseMatrix p;  // A * Ht            (V x K)
    DenseMatrix q;  // Ht^T * Ht          (K x K)
    DenseMatrix r;  // A^T * W            (D x K)
    DenseMatrix s;  // W^T * W            (K x K)
    DenseMatrix w_new;  // V x K
    DenseMatrix h_new;  // D x K
    std::vector<double> column_norms;     // K, last W-update norms
    std::vector<double> scratch;          // max(V, D) row accumulator
    std::vector<double> reduce_partials;  // per-thread partial sums
    std::optional<CsrMatrix> at;          // cached A^T when A is sparse

    PhaseTimes phase_times;
    std::uint64_t update_macs = 0;  // multiply-adds performed by the update paths
};

}  // namespace plnmf
