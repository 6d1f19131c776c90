#pragma once

#include "plnmf/input_matrix.hpp"
#include "plnmf/workspace.hpp"

namespace plnmf {

struct ErrorReport {
    double frobenius_sq = 0;  // ||A - W*H||_F^2
    double relative = 0;      // sqrt(frobenius_sq / a_norm_sq)
    double a_norm_sq = 0;
    bool cancellation = false;  // set when the Gram identity went negative and was clamped
};

// Materializes W*H row by row (sparse A contributes implicit zeros) and
// differences against A. The oracle path; O(V*D*K).
ErrorReport relative_error_direct(const InputMatrix& a, const DenseMatrix& w,
                                  const DenseMatrix& ht);

// Gram-identity fast path reusing the iteration's products:
// ||A - WH||^2 = ||A||^2 - 2*sum(P.*W) + sum((W^T W).*(H H^T)).
// Requires p, q, s computed against the current factors.
ErrorReport relative_error_gram(double a_norm_sq, const DenseMatrix& w, const DenseMatrix& ht,
                                const DenseMatrix& p, const DenseMatrix& q,
                                const DenseMatrix& s);

// max |a_ij - b_ij| scaled by the largest-magnitude element of ref.
// Well-defined even when individual elements sit at the clamp floor.
double factor_deviation(const DenseMatrix& ref, const DenseMatrix& other);

}  // namespace plnmf
