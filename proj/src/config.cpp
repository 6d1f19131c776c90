#include "plnmf/config.hpp"

#include <stdexcept>

namespace plnmf {

void SolverConfig::validate() const {
    if (rank < 1) throw std::invalid_argument("SolverConfig: rank must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
    if (max_iters < 0) throw std::invalid_argument("SolverConfig: max_iters must be >= 0");
    if (rel_tol < 0.0) throw std::invalid_argument("SolverConfig: rel_tol must be >= 0");
    if (error_every < 1) throw std::invalid_argument("SolverConfig: error_every must be >= 1");
    if (tile_size < 0 || tile_size > rank)
        throw std::invalid_argument("SolverConfig: tile_size must be in [1, rank] (0 = auto)");
}

}  // namespace plnmf
