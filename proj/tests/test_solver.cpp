#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "plnmf/linalg.hpp"
#include "plnmf/solver.hpp"

using namespace plnmf;

namespace {

InputMatrix planted_instance(index_t v, index_t d, index_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const DenseMatrix w = oracles::random_matrix(v, k, rng, 0.1, 1.0);
    const DenseMatrix ht = oracles::random_matrix(d, k, rng, 0.1, 1.0);
    DenseMatrix a(v, d);
    gemm(1.0, w.view(), false, ht.view(), true, 0.0, a.view());
    return InputMatrix(a);
}

}  // namespace

TEST_CASE("iterate with max_iters = 0 leaves the factors untouched") {
    std::mt19937_64 rng(1);
    const InputMatrix a(oracles::random_matrix(10, 8, rng, 0.0, 1.0));
    SolverConfig cfg;
    cfg.rank = 3;
    cfg.max_iters = 0;
    FactorPair f = init_factors(10, 8, cfg);
    const FactorPair before = f;
    const ConvergenceTrace trace = iterate(a, f, cfg, Algorithm::reference);
    CHECK(trace.records.empty());
    CHECK(f.w == before.w);
    CHECK(f.ht == before.ht);
    CHECK(trace.initial_error > 0.0);
}

TEST_CASE("iterate reduces the error on a planted low-rank instance") {
    const InputMatrix a = planted_instance(40, 30, 4, 9);
    SolverConfig cfg;
    cfg.rank = 4;
    cfg.max_iters = 200;
    cfg.rel_tol = 0.0;
    cfg.seed = 5;
    for (Algorithm alg : {Algorithm::reference, Algorithm::tiled}) {
        SolverConfig c = cfg;
        c.tile_size = alg == Algorithm::tiled ? 2 : 0;
        FactorPair f = init_factors(40, 30, c);
        const ConvergenceTrace trace = iterate(a, f, c, alg);
        REQUIRE_FALSE(trace.records.empty());
        CHECK(trace.records.back().rel_error < trace.initial_error);
        CHECK(trace.records.back().rel_error < 0.05);
    }
}

TEST_CASE("iterate is bitwise deterministic for a fixed seed and thread count") {
    std::mt19937_64 rng(2);
    const InputMatrix a(oracles::random_matrix(25, 20, rng, 0.0, 1.0));
    SolverConfig cfg;
    cfg.rank = 6;
    cfg.max_iters = 15;
    cfg.rel_tol = 0.0;
    cfg.seed = 77;
    cfg.deterministic = true;
    cfg.tile_size = 4;

    for (Algorithm alg : {Algorithm::reference, Algorithm::tiled}) {
        FactorPair f1 = init_factors(25, 20, cfg);
        FactorPair f2 = init_factors(25, 20, cfg);
        const ConvergenceTrace t1 = iterate(a, f1, cfg, alg);
        const ConvergenceTrace t2 = iterate(a, f2, cfg, alg);
        CHECK(f1.w == f2.w);
        CHECK(f1.ht == f2.ht);
        REQUIRE(t1.records.size() == t2.records.size());
        for (std::size_t i = 0; i < t1.records.size(); ++i)
            CHECK(t1.records[i].rel_error == t2.records[i].rel_error);
        CHECK(t1.initial_error == t2.initial_error);
    }
}

TEST_CASE("iterate aborts when the objective is not finite") {
    DenseMatrix huge(4, 3);
    for (index_t j = 0; j < 3; ++j)
        for (index_t i = 0; i < 4; ++i) huge(i, j) = 1e160;  // ||A||^2 overflows
    const InputMatrix a(huge);
    SolverConfig cfg;
    cfg.rank = 2;
    cfg.max_iters = 3;
    FactorPair f = init_factors(4, 3, cfg);
    CHECK_THROWS_AS(iterate(a, f, cfg, Algorithm::reference), std::runtime_error);
}

TEST_CASE("error cadence and early stopping") {
    std::mt19937_64 rng(3);
    const InputMatrix a(oracles::random_matrix(20, 16, rng, 0.0, 1.0));
    SolverConfig cfg;
    cfg.rank = 4;
    cfg.max_iters = 10;
    cfg.rel_tol = 0.0;
    cfg.error_every = 3;
    FactorPair f = init_factors(20, 16, cfg);
    const ConvergenceTrace trace = iterate(a, f, cfg, Algorithm::reference);
    REQUIRE(trace.records.size() == 3);
    CHECK(trace.records[0].iteration == 3);
    CHECK(trace.records[1].iteration == 6);
    CHECK(trace.records[2].iteration == 9);
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        CHECK(trace.records[i].iteration > trace.records[i - 1].iteration);
        CHECK(trace.records[i].elapsed_s >= trace.records[i - 1].elapsed_s);
    }

    // A loose tolerance on the planted instance stops well before max_iters.
    const InputMatrix planted = planted_instance(30, 24, 3, 4);
    SolverConfig loose;
    loose.rank = 3;
    loose.max_iters = 500;
    loose.rel_tol = 1e-3;
    loose.seed = 1;
    FactorPair g = init_factors(30, 24, loose);
    const ConvergenceTrace t = iterate(planted, g, loose, Algorithm::reference);
    CHECK(t.records.size() < 500);
}

TEST_CASE("iterate validates tiled configuration") {
    std::mt19937_64 rng(4);
    const InputMatrix a(oracles::random_matrix(10, 8, rng, 0.0, 1.0));
    SolverConfig cfg;
    cfg.rank = 3;
    FactorPair f = init_factors(10, 8, cfg);
    CHECK_THROWS_AS(iterate(a, f, cfg, Algorithm::tiled), std::invalid_argument);

    cfg.tile_size = 5;  // > rank
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("relative error is non-increasing on random instances") {
    std::mt19937_64 rng(6);
    const InputMatrix a(oracles::random_matrix(40, 32, rng, 0.0, 1.0));
    SolverConfig cfg;
    cfg.rank = 6;
    cfg.max_iters = 40;
    cfg.rel_tol = 0.0;
    cfg.seed = 13;
    cfg.tile_size = 3;
    for (Algorithm alg : {Algorithm::reference, Algorithm::tiled}) {
        FactorPair f = init_factors(40, 32, cfg);
        const ConvergenceTrace trace = iterate(a, f, cfg, alg);
        double prev = trace.initial_error;
        for (const TraceRecord& rec : trace.records) {
            CHECK(rec.rel_error <= prev + 1e-8);
            prev = rec.rel_error;
        }
    }
}
