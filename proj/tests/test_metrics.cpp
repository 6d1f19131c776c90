#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plnmf/linalg.hpp"
#include "plnmf/matrix_market.hpp"
#include "plnmf/metrics.hpp"

using namespace plnmf;

namespace {

DenseMatrix reconstruct(const DenseMatrix& w, const DenseMatrix& ht) {
    DenseMatrix a(w.rows(), ht.rows());
    gemm(1.0, w.view(), false, ht.view(), true, 0.0, a.view());
    return a;
}

}  // namespace

TEST_CASE("direct error: exact reconstruction, zero factors, hand value") {
    std::mt19937_64 rng(1);
    const DenseMatrix w = oracles::random_matrix(10, 3, rng, 0.1, 1.0);
    const DenseMatrix ht = oracles::random_matrix(8, 3, rng, 0.1, 1.0);
    const InputMatrix a(reconstruct(w, ht));
    CHECK(relative_error_direct(a, w, ht).relative < 1e-12);

    // Zero W reproduces nothing: numerator equals ||A||^2.
    CHECK(relative_error_direct(a, DenseMatrix(10, 3), ht).relative == doctest::Approx(1.0));

    DenseMatrix a2(2, 2);
    a2(0, 0) = a2(1, 1) = 2.0;
    DenseMatrix w1(2, 1), h1(2, 1);
    w1(0, 0) = w1(1, 0) = 1.0;
    h1(0, 0) = h1(1, 0) = 1.0;
    const ErrorReport rep = relative_error_direct(InputMatrix(a2), w1, h1);
    CHECK(rep.frobenius_sq == doctest::Approx(4.0));
    CHECK(rep.a_norm_sq == doctest::Approx(8.0));
    CHECK(rep.relative == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("direct error rejects a zero input matrix") {
    const InputMatrix zero(DenseMatrix(3, 3));
    CHECK_THROWS_AS(relative_error_direct(zero, DenseMatrix(3, 1), DenseMatrix(3, 1)),
                    std::domain_error);
}

TEST_CASE("direct error treats CSR implicit zeros as dense zeros") {
    std::mt19937_64 rng(2);
    const CsrMatrix ac = oracles::random_csr(12, 9, 0.2, rng);
    const DenseMatrix w = oracles::random_matrix(12, 3, rng);
    const DenseMatrix ht = oracles::random_matrix(9, 3, rng);
    const ErrorReport sparse_rep = relative_error_direct(InputMatrix(ac), w, ht);
    const ErrorReport dense_rep = relative_error_direct(InputMatrix(densify(ac)), w, ht);
    CHECK(sparse_rep.relative == doctest::Approx(dense_rep.relative).epsilon(1e-12));
    CHECK(sparse_rep.a_norm_sq == doctest::Approx(dense_rep.a_norm_sq).epsilon(1e-12));
}

TEST_CASE("gram path agrees with the direct path away from cancellation") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 8; ++trial) {
        const DenseMatrix w = oracles::random_matrix(30, 5, rng, 0.0, 1.0);
        const DenseMatrix ht = oracles::random_matrix(20, 5, rng, 0.0, 1.0);
        const InputMatrix a(oracles::random_matrix(30, 20, rng, 0.0, 1.0));
        DenseMatrix p(30, 5);
        gemm(1.0, a.dense().view(), false, ht.view(), false, 0.0, p.view());
        const ErrorReport direct = relative_error_direct(a, w, ht);
        const ErrorReport fast =
            relative_error_gram(a.norm_sq(), w, ht, p, gram(ht), gram(w));
        CHECK(std::abs(direct.relative - fast.relative) / direct.relative < 1e-10);
        if (direct.relative > 1e-6)
            CHECK(std::abs(direct.relative - fast.relative) / direct.relative < 1e-8);
    }
}

TEST_CASE("gram path on exact reconstructions is cancellation-limited") {
    std::mt19937_64 rng(4);
    const DenseMatrix w = oracles::random_matrix(15, 4, rng, 0.1, 1.0);
    const DenseMatrix ht = oracles::random_matrix(12, 4, rng, 0.1, 1.0);
    const InputMatrix a(reconstruct(w, ht));
    DenseMatrix p(15, 4);
    gemm(1.0, a.dense().view(), false, ht.view(), false, 0.0, p.view());
    const ErrorReport rep = relative_error_gram(a.norm_sq(), w, ht, p, gram(ht), gram(w));
    CHECK(rep.relative <= 1e-8);

    // Rank-1 outer product of unit vectors.
    DenseMatrix w1(5, 1), h1(4, 1);
    w1(2, 0) = 1.0;
    h1(1, 0) = 1.0;
    const InputMatrix a1(reconstruct(w1, h1));
    DenseMatrix p1(5, 1);
    gemm(1.0, a1.dense().view(), false, h1.view(), false, 0.0, p1.view());
    CHECK(relative_error_gram(a1.norm_sq(), w1, h1, p1, gram(h1), gram(w1)).relative <= 1e-10);
}

TEST_CASE("gram path clamps negative cancellation results and flags them") {
    DenseMatrix one(1, 1);
    one(0, 0) = 1.0;
    // Fabricated inputs: a_norm_sq - 2*<P,W> + <S,Q> = 0.5 - 2 + 1 < 0.
    const ErrorReport rep = relative_error_gram(0.5, one, one, one, one, one);
    CHECK(rep.cancellation);
    CHECK(rep.frobenius_sq == 0.0);
    CHECK(rep.relative == 0.0);
}

TEST_CASE("factor deviation is scale-relative and zero on identical inputs") {
    std::mt19937_64 rng(5);
    const DenseMatrix m = oracles::random_matrix(6, 4, rng, -3, 3);
    CHECK(factor_deviation(m, m) == 0.0);
    DenseMatrix shifted = m;
    shifted(2, 1) += 1e-8;
    CHECK(factor_deviation(m, shifted) == doctest::Approx(1e-8 / 3.0).epsilon(0.5));
}
