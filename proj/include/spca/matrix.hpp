#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

namespace spca {

// Dense, column-major. Columns are contiguous, which is what the kernels in
// kernels.hpp expect when they walk a data matrix feature by feature.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Sorted, duplicate-free coordinate indices (0-based).
using IndexSet = std::vector<Index>;

// Throws ErrorKind::invalid_argument when the matrix is empty or holds a
// non-finite entry.
void require_finite(const Matrix& m, std::string_view what);

// (1/n) X'X, no centering unless asked for (the model is mean zero).
Matrix sample_covariance(const Matrix& x, bool center = false);

// Diagonal of X'X, i.e. squared Euclidean norm of each column.
Vector column_squared_norms(const Matrix& x);

// Squared Euclidean norm of each row.
Vector row_squared_norms(const Matrix& x);

// (1/scale) * X_{:,J}' X_{:,J} for the listed columns.
Matrix gram_of_columns(const Matrix& x, const IndexSet& columns, double scale);

// A'B, evaluated column-pair by column-pair with the dot kernel.
Matrix transpose_times(const Matrix& a, const Matrix& b);

// Rows of m selected by `rows`, in order.
Matrix select_rows(const Matrix& m, const IndexSet& rows);

}  // namespace spca
