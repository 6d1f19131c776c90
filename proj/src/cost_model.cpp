#include "plnmf/cost_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace plnmf {

namespace {

using u128 = unsigned __int128;

std::uint64_t checked_u64(u128 x, const char* what) {
    if (x > static_cast<u128>(std::numeric_limits<std::uint64_t>::max()))
        throw std::overflow_error(what);
    return static_cast<std::uint64_t>(x);
}

void require_shape(const ProblemShape& s) {
    if (s.v < 0 || s.d < 0 || s.k < 0)
        throw std::invalid_argument("cost model: negative problem dimension");
}

void require_tile(const ProblemShape& s, index_t t) {
    if (t < 1 || t > s.k) throw std::invalid_argument("cost model: tile size must be in [1, K]");
}

double inv_sqrt_cache(const MachineModel& m) {
    return 2.0 / std::sqrt(static_cast<double>(m.cache_words()));
}

}  // namespace

std::uint64_t MachineModel::cache_words() const {
    if (word_bytes == 0) throw std::invalid_argument("MachineModel: word_bytes must be > 0");
    const std::uint64_t words = cache_bytes / word_bytes;
    if (words < 1) throw std::invalid_argument("MachineModel: cache must hold at least one word");
    return words;
}

CostEstimate cost_fasthals_total(const ProblemShape& shape, const MachineModel& machine) {
    require_shape(shape);
    const double v = static_cast<double>(shape.v);
    const double d = static_cast<double>(shape.d);
    const double k = static_cast<double>(shape.k);
    const double c2 = inv_sqrt_cache(machine);
    const double sqrt_c = std::sqrt(static_cast<double>(machine.cache_words()));

    CostEstimate est;
    est.total = k * (k * (v + d) * (1.0 + c2) + 4.0 * v * d / sqrt_c + 6.0 * v + 3.0 * d +
                     2.0 * k + 1.0);
    est.terms = {
        {"matrix_products", (2.0 * k * k * (v + d) + 4.0 * v * d * k) / sqrt_c},
        {"w_column_loop", k * (v * k + k + 6.0 * v + 1.0)},
        {"h_row_loop", k * (3.0 * d + d * k + k)},
    };
    return est;
}

std::uint64_t cost_w_column_loop(const ProblemShape& shape) {
    require_shape(shape);
    const u128 v = shape.v;
    const u128 k = shape.k;
    return checked_u64(k * (v * k + k + 6 * v + 1), "cost_w_column_loop: overflow");
}

std::uint64_t cost_h_row_loop(const ProblemShape& shape) {
    require_shape(shape);
    const u128 d = shape.d;
    const u128 k = shape.k;
    return checked_u64(k * (3 * d + d * k + k), "cost_h_row_loop: overflow");
}

double cost_phase1(const ProblemShape& shape, const MachineModel& machine, index_t t) {
    require_shape(shape);
    require_tile(shape, t);
    const double v = static_cast<double>(shape.v);
    const double k = static_cast<double>(shape.k);
    const double td = static_cast<double>(t);
    const double c2 = inv_sqrt_cache(machine);
    return v * td * td * (1.0 / td + c2) * ((k * k - k * td) / (2.0 * td * td));
}

double cost_phase2(const ProblemShape& shape, index_t t) {
    require_shape(shape);
    require_tile(shape, t);
    const double v = static_cast<double>(shape.v);
    const double k = static_cast<double>(shape.k);
    const double td = static_cast<double>(t);
    return k * (v * td + td + v);
}

CostEstimate vol(const ProblemShape& shape, const MachineModel& machine, index_t t) {
    require_shape(shape);
    require_tile(shape, t);
    const double v = static_cast<double>(shape.v);
    const double k = static_cast<double>(shape.k);
    const double td = static_cast<double>(t);
    const double c2 = inv_sqrt_cache(machine);

    const double panels = v * (1.0 / td + c2) * (k * k - k * td);
    const double sweep = k * v * td;

    CostEstimate est;
    est.total = panels + sweep;
    est.terms = {
        {"phase1_3", panels},
        {"phase2", sweep},
        {"phase2_full", cost_phase2(shape, t)},
    };
    return est;
}

double model_tile_size(index_t k, const MachineModel& machine) {
    const double c2 = inv_sqrt_cache(machine);
    if (static_cast<double>(k) <= c2)
        throw std::domain_error("model_tile_size: K must exceed 2/sqrt(C)");
    return std::sqrt(static_cast<double>(k) - c2);
}

double stationary_tile_size(index_t k, const MachineModel& machine) {
    const double c2 = inv_sqrt_cache(machine);
    if (k < 1) throw std::domain_error("stationary_tile_size: K must be >= 1");
    if (c2 >= 1.0)
        throw std::domain_error("stationary_tile_size: cache too small, 2/sqrt(C) >= 1");
    return std::sqrt(static_cast<double>(k) / (1.0 - c2));
}

index_t best_integer_tile(const ProblemShape& shape, const MachineModel& machine) {
    require_shape(shape);
    if (shape.k < 1) throw std::invalid_argument("best_integer_tile: K must be >= 1");
    index_t best = 1;
    double best_vol = vol(shape, machine, 1).total;
    for (index_t t = 2; t <= shape.k; ++t) {
        const double v = vol(shape, machine, t).total;
        if (v < best_vol) {
            best_vol = v;
            best = t;
        }
    }
    return best;
}

}  // namespace plnmf
