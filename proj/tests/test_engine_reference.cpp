#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plnmf/hals.hpp"
#include "plnmf/matrix_market.hpp"
#include "plnmf/solver.hpp"

using namespace plnmf;

namespace {

SolverConfig config_with_rank(index_t k) {
    SolverConfig cfg;
    cfg.rank = k;
    return cfg;
}

double column_norm(const DenseMatrix& m, index_t c) {
    double ss = 0.0;
    for (index_t i = 0; i < m.rows(); ++i) ss += m(i, c) * m(i, c);
    return std::sqrt(ss);
}

}  // namespace

TEST_CASE("init_factors is a deterministic function of the seed") {
    SolverConfig cfg = config_with_rank(4);
    cfg.seed = 99;
    const FactorPair a = init_factors(12, 9, cfg);
    const FactorPair b = init_factors(12, 9, cfg);
    CHECK(a.w == b.w);
    CHECK(a.ht == b.ht);

    cfg.seed = 100;
    const FactorPair c = init_factors(12, 9, cfg);
    CHECK_FALSE(a.w == c.w);
}

TEST_CASE("init_factors respects the [epsilon, 1) range") {
    SolverConfig cfg = config_with_rank(3);
    cfg.epsilon = 1e-3;
    const FactorPair f = init_factors(20, 15, cfg);
    for (const DenseMatrix* m : {&f.w, &f.ht}) {
        for (index_t j = 0; j < m->cols(); ++j)
            for (index_t i = 0; i < m->rows(); ++i) {
                CHECK((*m)(i, j) >= cfg.epsilon);
                CHECK((*m)(i, j) < 1.0);
            }
    }
    CHECK_THROWS_AS(init_factors(0, 5, cfg), std::invalid_argument);
    CHECK_THROWS_AS(init_factors(5, 0, cfg), std::invalid_argument);
}

TEST_CASE("precompute_h_products: identity and orthonormal cases") {
    // A = I (dense 4x4), selector W columns.
    const InputMatrix a(oracles::identity(4));
    DenseMatrix w(4, 2);
    w(1, 0) = 1.0;
    w(3, 1) = 1.0;
    UpdateWorkspace ws(4, 4, 2);
    precompute_h_products(a, w, ws);
    CHECK(ws.r == w);                        // A^T W = W
    CHECK(ws.s == oracles::identity(2));     // orthonormal columns
}

TEST_CASE("precompute_h_products matches the densify oracle") {
    std::mt19937_64 rng(5);
    const CsrMatrix ac = oracles::random_csr(5, 4, 0.6, rng);
    const InputMatrix a(ac);
    const DenseMatrix w = oracles::random_matrix(5, 2, rng);
    UpdateWorkspace ws(5, 4, 2);
    precompute_h_products(a, w, ws);

    const DenseMatrix ad = densify(ac);
    const DenseMatrix r_want =
        oracles::naive_gemm(1.0, ad, true, w, false, 0.0, DenseMatrix(4, 2));
    const DenseMatrix s_want =
        oracles::naive_gemm(1.0, w, true, w, false, 0.0, DenseMatrix(2, 2));
    CHECK(oracles::max_abs_diff(ws.r, r_want) < 1e-12);
    CHECK(oracles::max_abs_diff(ws.s, s_want) < 1e-12);
}

TEST_CASE("precompute_w_products: selector columns of Ht pick columns of A") {
    std::mt19937_64 rng(8);
    const DenseMatrix ad = oracles::random_matrix(6, 5, rng);
    const InputMatrix a(ad);
    DenseMatrix ht(5, 2);
    ht(3, 0) = 1.0;  // column 0 of P = column 3 of A
    ht(1, 1) = 1.0;
    UpdateWorkspace ws(6, 5, 2);
    precompute_w_products(a, ht, ws);
    for (index_t v = 0; v < 6; ++v) {
        CHECK(ws.p(v, 0) == ad(v, 3));
        CHECK(ws.p(v, 1) == ad(v, 1));
    }
    CHECK(ws.q == oracles::identity(2));
}

TEST_CASE("precompute_w_products matches the oracle on a random instance") {
    std::mt19937_64 rng(9);
    const DenseMatrix ad = oracles::random_matrix(7, 6, rng);
    const DenseMatrix ht = oracles::random_matrix(6, 3, rng);
    UpdateWorkspace ws(7, 6, 3);
    precompute_w_products(InputMatrix(ad), ht, ws);
    CHECK(oracles::max_abs_diff(
              ws.p, oracles::naive_gemm(1.0, ad, false, ht, false, 0.0, DenseMatrix(7, 3))) <
          1e-12);
    CHECK(oracles::max_abs_diff(
              ws.q, oracles::naive_gemm(1.0, ht, true, ht, false, 0.0, DenseMatrix(3, 3))) <
          1e-12);
}

TEST_CASE("update_h_reference: K=1 with unit W column reduces to clamp(R)") {
    // S = [[1]] exactly when W is a selector column.
    SolverConfig cfg = config_with_rank(1);
    UpdateWorkspace ws(3, 3, 1);
    ws.s(0, 0) = 1.0;
    FactorPair f{DenseMatrix(3, 1), DenseMatrix(3, 1)};
    for (index_t i = 0; i < 3; ++i) {
        f.ht(i, 0) = static_cast<double>(2 + i);  // integers keep the cancellation exact
        ws.r(i, 0) = static_cast<double>(5 * (i + 1));
    }
    update_h_reference(f, ws, cfg);
    for (index_t i = 0; i < 3; ++i) CHECK(f.ht(i, 0) == ws.r(i, 0));
}

TEST_CASE("update_h_reference: negative R with S = I clamps to epsilon") {
    SolverConfig cfg = config_with_rank(2);
    cfg.epsilon = 1e-12;
    UpdateWorkspace ws(4, 4, 2);
    ws.s(0, 0) = ws.s(1, 1) = 1.0;
    FactorPair f{DenseMatrix(4, 2), DenseMatrix(4, 2)};
    std::mt19937_64 rng(2);
    f.ht = oracles::random_matrix(4, 2, rng, 0.1, 1.0);
    for (index_t j = 0; j < 2; ++j)
        for (index_t i = 0; i < 4; ++i) ws.r(i, j) = -1.0 - static_cast<double>(i + j);
    update_h_reference(f, ws, cfg);
    for (index_t j = 0; j < 2; ++j)
        for (index_t i = 0; i < 4; ++i) CHECK(f.ht(i, j) == cfg.epsilon);
}

TEST_CASE("update_h_reference matches the literal scalar oracle") {
    const index_t v_dim = 6, d_dim = 5, k_dim = 3;
    std::mt19937_64 rng(31);
    const InputMatrix a(oracles::random_matrix(v_dim, d_dim, rng));
    SolverConfig cfg = config_with_rank(k_dim);
    cfg.seed = 7;
    FactorPair f = init_factors(v_dim, d_dim, cfg);
    UpdateWorkspace ws(v_dim, d_dim, k_dim);
    precompute_h_products(a, f.w, ws);

    // Oracle works on H (K x D, row-major); note H = Ht^T.
    std::vector<double> h(k_dim * d_dim);
    for (index_t k = 0; k < k_dim; ++k)
        for (index_t d = 0; d < d_dim; ++d) h[k * d_dim + d] = f.ht(d, k);
    update_h_reference(f, ws, cfg);
    oracles::hals_update_h(h, k_dim, d_dim, oracles::to_col_major(ws.r),
                           oracles::to_col_major(ws.s), cfg.epsilon);
    double max_diff = 0.0;
    for (index_t k = 0; k < k_dim; ++k)
        for (index_t d = 0; d < d_dim; ++d)
            max_diff = std::max(max_diff, std::abs(h[k * d_dim + d] - f.ht(d, k)));
    CHECK(max_diff < 1e-13);
}

TEST_CASE("update_w_reference: Q = I normalizes the clamped additive term") {
    const index_t v_dim = 4, k_dim = 3;
    SolverConfig cfg = config_with_rank(k_dim);
    UpdateWorkspace ws(v_dim, 4, k_dim);
    ws.q = oracles::identity(k_dim);
    FactorPair f{DenseMatrix(v_dim, k_dim), DenseMatrix(4, k_dim)};
    for (index_t k = 0; k < k_dim; ++k)
        for (index_t v = 0; v < v_dim; ++v) {
            f.w(v, k) = static_cast<double>(1 + v + k);      // integers: (w + p) - w is exact
            ws.p(v, k) = static_cast<double>(3 + 2 * v + k);
        }
    const DenseMatrix p_copy = ws.p;
    update_w_reference(f, ws, cfg);
    for (index_t k = 0; k < k_dim; ++k) {
        double ss = 0.0;
        for (index_t v = 0; v < v_dim; ++v) ss += p_copy(v, k) * p_copy(v, k);
        const double norm = std::sqrt(ss);
        for (index_t v = 0; v < v_dim; ++v)
            CHECK(f.w(v, k) == doctest::Approx(p_copy(v, k) / norm).epsilon(1e-15));
    }
}

TEST_CASE("update_w_reference matches the literal scalar oracle") {
    const index_t v_dim = 6, d_dim = 5, k_dim = 3;
    std::mt19937_64 rng(37);
    const InputMatrix a(oracles::random_matrix(v_dim, d_dim, rng));
    SolverConfig cfg = config_with_rank(k_dim);
    cfg.seed = 21;
    FactorPair f = init_factors(v_dim, d_dim, cfg);
    UpdateWorkspace ws(v_dim, d_dim, k_dim);
    precompute_w_products(a, f.ht, ws);

    std::vector<double> w = oracles::to_row_major(f.w);
    std::vector<double> p = oracles::to_row_major(ws.p);
    std::vector<double> q = oracles::to_row_major(ws.q);
    update_w_reference(f, ws, cfg);
    oracles::hals_update_w(w, v_dim, k_dim, p, q, cfg.epsilon);
    const DenseMatrix w_want = oracles::from_row_major(w, v_dim, k_dim);
    CHECK(oracles::max_abs_diff(w_want, f.w) < 1e-13);

    for (index_t k = 0; k < k_dim; ++k) {
        CHECK(std::abs(column_norm(f.w, k) - 1.0) <= 1e-12);
        for (index_t v = 0; v < v_dim; ++v) CHECK(f.w(v, k) >= cfg.epsilon);
    }
}
