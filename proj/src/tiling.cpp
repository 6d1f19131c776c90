#include "plnmf/tiling.hpp"

#include <algorithm>
#include <stdexcept>

namespace plnmf {

TilingPlan plan_tiles(index_t k, index_t tile_size) {
    if (k < 1) throw std::invalid_argument("plan_tiles: k must be >= 1");
    if (tile_size < 1 || tile_size > k)
        throw std::invalid_argument("plan_tiles: tile size must be in [1, k]");
    TilingPlan plan;
    plan.tile_size = tile_size;
    for (index_t b = 0; b < k; b += tile_size) {
        plan.tiles.push_back({b, std::min(k, b + tile_size)});
    }
    return plan;
}

}  // namespace plnmf
