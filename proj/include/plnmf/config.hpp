#pragma once

#include <cstdint>

#include "plnmf/dense_matrix.hpp"

namespace plnmf {

enum class Algorithm { reference, tiled };

struct SolverConfig {
    index_t rank = 2;           // K
    double epsilon = 1e-16;     // clamp floor, > 0
    index_t max_iters = 100;
    double rel_tol = 1e-6;      // stop when the objective's relative change falls below it
    std::uint64_t seed = 0;
    index_t error_every = 1;    // objective evaluation cadence, >= 1
    bool deterministic = false;
    index_t tile_size = 0;      // 0 = unresolved; the tiled path needs a value in [1, rank]

    void validate() const;
};

}  // namespace plnmf
