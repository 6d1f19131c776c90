#pragma once

#include "plnmf/config.hpp"
#include "plnmf/input_matrix.hpp"
#include "plnmf/workspace.hpp"

namespace plnmf {

// ws.r := A^T * W, ws.s := W^T * W. For sparse A the transposed CSR is built
// once and cached in ws.
void precompute_h_products(const InputMatrix& a, const DenseMatrix& w, UpdateWorkspace& ws);

// ws.p := A * Ht, ws.q := Ht^T * Ht.
void precompute_w_products(const InputMatrix& a, const DenseMatrix& ht, UpdateWorkspace& ws);

// Serial reference updaters: one column at a time, each column's update
// reading already-updated columns to its left and old columns to its right.
// Kept deliberately close to the textbook formulation; the tiled kernels are
// tested against these.
void update_h_reference(FactorPair& factors, UpdateWorkspace& ws, const SolverConfig& config);
void update_w_reference(FactorPair& factors, UpdateWorkspace& ws, const SolverConfig& config);

}  // namespace plnmf
