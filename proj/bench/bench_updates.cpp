// Times the serial reference updaters against the OpenMP tiled updaters on a
// synthetic dense instance, one row per tile size, plus the movement model's
// prediction for context.
//
//   plnmf-bench [V D K iters [T1 T2 ...]]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <vector>

#include "plnmf/cost_model.hpp"
#include "plnmf/hals.hpp"
#include "plnmf/solver.hpp"
#include "plnmf/tiled.hpp"

using namespace plnmf;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

InputMatrix random_input(index_t v, index_t d) {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    DenseMatrix a(v, d);
    for (index_t j = 0; j < d; ++j)
        for (index_t i = 0; i < v; ++i) a(i, j) = dist(rng);
    return InputMatrix(a);
}

double time_updates(const InputMatrix& a, const SolverConfig& cfg, index_t iters, bool tiled,
                    const TilingPlan& plan, double* update_only) {
    FactorPair f = init_factors(a.rows(), a.cols(), cfg);
    UpdateWorkspace ws(a.rows(), a.cols(), cfg.rank);
    const double t0 = now_seconds();
    for (index_t it = 0; it < iters; ++it) {
        precompute_h_products(a, f.w, ws);
        if (tiled)
            update_h_tiled(f, ws, plan, cfg);
        else
            update_h_reference(f, ws, cfg);
        precompute_w_products(a, f.ht, ws);
        if (tiled)
            update_w_tiled(f, ws, plan, cfg);
        else
            update_w_reference(f, ws, cfg);
    }
    const double total = now_seconds() - t0;
    const PhaseTimes& pt = ws.phase_times;
    *update_only = pt.update_h + pt.update_w + pt.phase1 + pt.phase2 + pt.phase3 + pt.normalize;
    return total;
}

}  // namespace

int main(int argc, char** argv) {
    index_t v = 4000, d = 2000, k = 160, iters = 3;
    std::vector<index_t> tiles;
    if (argc >= 5) {
        v = std::atoll(argv[1]);
        d = std::atoll(argv[2]);
        k = std::atoll(argv[3]);
        iters = std::atoll(argv[4]);
        for (int i = 5; i < argc; ++i) tiles.push_back(std::atoll(argv[i]));
    }
    const MachineModel machine{};
    if (tiles.empty()) {
        std::set<index_t> grid{1, k};
        for (index_t t = 2; t < k; t *= 2) grid.insert(t);
        grid.insert(best_integer_tile({v, d, k}, machine));
        tiles.assign(grid.begin(), grid.end());
    }

    std::printf("V=%lld D=%lld K=%lld, %lld iterations, %d threads\n", static_cast<long long>(v),
                static_cast<long long>(d), static_cast<long long>(k),
                static_cast<long long>(iters), omp_get_max_threads());
    const InputMatrix a = random_input(v, d);
    SolverConfig cfg;
    cfg.rank = k;

    double upd = 0.0;
    const double ref_total = time_updates(a, cfg, iters, false, TilingPlan{}, &upd);
    std::printf("%-16s  %10s  %14s  %14s\n", "variant", "s/iter", "update s/iter",
                "predicted vol");
    std::printf("%-16s  %10.4f  %14.4f  %14s\n", "reference", ref_total / iters, upd / iters, "-");

    const index_t recommended = best_integer_tile({v, d, k}, machine);
    for (index_t t : tiles) {
        cfg.tile_size = t;
        const TilingPlan plan = plan_tiles(k, t);
        const double total = time_updates(a, cfg, iters, true, plan, &upd);
        char label[32];
        std::snprintf(label, sizeof(label), "tiled T=%lld%s", static_cast<long long>(t),
                      t == recommended ? " *" : "");
        std::printf("%-16s  %10.4f  %14.4f  %14.0f\n", label, total / iters, upd / iters,
                    vol({v, d, k}, machine, t).total);
    }
    std::printf("* = model-recommended tile\n");
    return 0;
}
