#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plnmf/dense_matrix.hpp"

namespace plnmf {

// Cache model: all data-movement formulas count 8-byte words ("elements"),
// so the cache size enters as C = cache_bytes / word_bytes words.
struct MachineModel {
    std::uint64_t cache_bytes = 35ull << 20;
    std::uint64_t word_bytes = 8;

    std::uint64_t cache_words() const;
};

struct ProblemShape {
    index_t v = 1;
    index_t d = 1;
    index_t k = 1;
};

// Predicted element-movement count with a per-term breakdown.
struct CostEstimate {
    double total = 0;
    std::vector<std::pair<std::string, double>> terms;
};

// Total predicted movement of one full reference iteration:
// K(K(V+D)(1 + 2/sqrt(C)) + 4VD/sqrt(C) + 6V + 3D + 2K + 1).
CostEstimate cost_fasthals_total(const ProblemShape& shape, const MachineModel& machine);

// Exact movement of the reference W column loop: K(VK + K + 6V + 1).
std::uint64_t cost_w_column_loop(const ProblemShape& shape);

// Exact movement of the reference H row loop: K(3D + DK + K).
std::uint64_t cost_h_row_loop(const ProblemShape& shape);

// Movement of the left-contribution panel products under tile size T:
// V*T^2*(1/T + 2/sqrt(C)) * (K^2 - KT) / (2T^2). Zero at T = K.
double cost_phase1(const ProblemShape& shape, const MachineModel& machine, index_t t);

// Movement of the sequential in-tile sweep including its lower-order vector
// terms: K(VT + T + V).
double cost_phase2(const ProblemShape& shape, index_t t);

// Total movement of one tiled W update:
// vol(T) = V(1/T + 2/sqrt(C))(K^2 - KT) + KVT.
// The second term drops the +T+V lower-order part of the full in-tile cost,
// which is exposed in the breakdown as "phase2_full".
CostEstimate vol(const ProblemShape& shape, const MachineModel& machine, index_t t);

// Closed-form tile size sqrt(K - 2/sqrt(C)). Requires K > 2/sqrt(C).
double model_tile_size(index_t k, const MachineModel& machine);

// Exact stationary point of vol(T): sqrt(K / (1 - 2/sqrt(C))). The closed
// form above differs from it by O(2/sqrt(C)); both are provided.
double stationary_tile_size(index_t k, const MachineModel& machine);

// argmin of vol over integer T in [1, K]; ties break toward smaller T.
index_t best_integer_tile(const ProblemShape& shape, const MachineModel& machine);

}  // namespace plnmf
