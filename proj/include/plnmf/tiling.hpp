#pragma once

#include <vector>

#include "plnmf/dense_matrix.hpp"

namespace plnmf {

struct TileRange {
    index_t begin = 0;
    index_t end = 0;
    index_t width() const { return end - begin; }
};

// Contiguous, ordered, non-overlapping column ranges covering [0, K).
// All tiles have width tile_size except possibly a shorter last one.
struct TilingPlan {
    index_t tile_size = 0;
    std::vector<TileRange> tiles;
    index_t gamma() const { return static_cast<index_t>(tiles.size()); }
};

// Requires 1 <= tile_size <= k.
TilingPlan plan_tiles(index_t k, index_t tile_size);

}  // namespace plnmf
