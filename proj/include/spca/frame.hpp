#pragma once

#include "spca/matrix.hpp"

namespace spca {

// p x r matrix with orthonormal columns, identified with the subspace it
// spans. Construction checks basis' * basis = I_r entrywise.
class OrthonormalFrame {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit OrthonormalFrame(Matrix basis, double tolerance = kTolerance);

  const Matrix& basis() const { return basis_; }
  Index p() const { return basis_.rows(); }
  Index r() const { return basis_.cols(); }

  // V V'
  Matrix projection() const { return basis_ * basis_.transpose(); }

 private:
  Matrix basis_;
};

// Flips column signs so the first entry with |v| > 1e-12 of each column is
// positive. Span and projection are unchanged.
void normalize_column_signs(Matrix& m);

}  // namespace spca
