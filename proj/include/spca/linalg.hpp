#pragma once

#include "spca/matrix.hpp"

namespace spca {

struct EigenPairs {
  Vector values;   // descending
  Matrix vectors;  // matching columns, sign-normalized
};

// Leading `count` eigenpairs of a symmetric matrix. Only the lower triangle is
// read.
EigenPairs leading_eigenpairs(const Matrix& symmetric, Index count);

// All eigenvalues of a symmetric matrix, descending.
Vector eigenvalues_descending(const Matrix& symmetric);

struct ThinSvd {
  Matrix left;      // n x r
  Vector singular;  // descending
  Matrix right;     // r x r
};

ThinSvd thin_svd(const Matrix& m);

// Largest eigenvalue of (1/n) X'X by power iteration on X, without forming
// the p x p product. Deterministic start; stops when the Rayleigh quotient
// changes by less than 1e-13 relative, or after max_iter steps.
double largest_covariance_eigenvalue(const Matrix& x, int max_iter = 5000);

}  // namespace spca
