#pragma once

#include "plnmf/config.hpp"
#include "plnmf/tiling.hpp"
#include "plnmf/workspace.hpp"

namespace plnmf {

// new_buf[i][k] = old[i][k] * diag_src[k][k] when use_diag, else old[i][k].
void init_new_accumulator(const DenseMatrix& old_mat, const DenseMatrix& diag_src,
                          DenseMatrix& new_buf, bool use_diag, UpdateWorkspace& ws);

// For every tile after the first, subtract the tile's old values scaled by
// coeff into all columns strictly left of it. One panel gemm per tile.
void phase1_left_contributions(const DenseMatrix& old_mat, const DenseMatrix& coeff,
                               const TilingPlan& plan, DenseMatrix& new_buf,
                               UpdateWorkspace& ws);

// Sequential in-tile column updates: column t consumes already-updated
// columns k < t and old columns k >= t of the same tile, adds additive[:,t],
// clamps at epsilon, and (when normalize) divides by the column L2 norm
// before column t+1 starts. Rows are processed in parallel.
void phase2_in_tile(const DenseMatrix& old_mat, DenseMatrix& new_buf,
                    const DenseMatrix& coeff, const DenseMatrix& additive,
                    const TilingPlan& plan, index_t tile_idx, bool normalize,
                    const SolverConfig& config, UpdateWorkspace& ws);

// Subtract the tile's freshly-updated values scaled by coeff into all columns
// strictly right of it. One panel gemm.
void phase3_right_contributions(DenseMatrix& new_buf, const DenseMatrix& coeff,
                                const TilingPlan& plan, index_t tile_idx,
                                UpdateWorkspace& ws);

// Full tiled updates: init, phase 1 over all tiles, then per tile phase 2
// followed by phase 3, then the buffer swap. Equal to the reference updates
// up to floating-point reordering.
void update_w_tiled(FactorPair& factors, UpdateWorkspace& ws, const TilingPlan& plan,
                    const SolverConfig& config);
void update_h_tiled(FactorPair& factors, UpdateWorkspace& ws, const TilingPlan& plan,
                    const SolverConfig& config);

}  // namespace plnmf
