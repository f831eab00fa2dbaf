#pragma once

#include "spca/frame.hpp"
#include "spca/matrix.hpp"

namespace spca {

enum class RankPolicy { equal, allow_different };

// ||AA' - BB'||_F^2, evaluated as r_a + r_b - 2||B'A||_F^2. With equal ranks
// this is twice the sum of squared sines of the principal angles, and lies in
// [0, 2 min(r, p - r)].
double subspace_loss(const OrthonormalFrame& a, const OrthonormalFrame& b,
                     RankPolicy policy = RankPolicy::equal);

// Same quantity from the explicit p x p projection matrices. O(p^2 r); kept
// as an independent route for cross-checking.
double subspace_loss_dense(const OrthonormalFrame& a, const OrthonormalFrame& b);

// max_j j * ||row_(j)||^q over rows sorted by descending norm (ties by
// ascending index). For q = 0 a row counts when its norm exceeds 1e-12.
double weak_lq_radius(const Matrix& m, double q);

// Row indices sorted by descending Euclidean norm, ties by ascending index.
IndexSet rows_by_descending_norm(const Vector& squared_norms);

// Orthonormal basis of span(m) via column-pivoted Householder QR, sign
// normalized. Throws ErrorKind::rank_deficient when the smallest singular
// value of m is <= 1e-10 times the largest.
OrthonormalFrame orthonormalize(const Matrix& m);

}  // namespace spca
