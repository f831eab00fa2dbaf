#include "spca/linalg.hpp"

#include <cmath>
#include <string>

#include "spca/error.hpp"
#include "spca/frame.hpp"

namespace spca {

EigenPairs leading_eigenpairs(const Matrix& symmetric, Index count) {
  const Index m = symmetric.rows();
  if (symmetric.cols() != m) throw Error(ErrorKind::dimension_mismatch, "eigen: matrix not square");
  if (count < 0 || count > m) {
    throw Error(ErrorKind::invalid_argument,
                "eigen: requested " + std::to_string(count) + " of " + std::to_string(m) + " pairs");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_argument, "eigen: decomposition did not converge");
  }
  EigenPairs out;
  out.values = solver.eigenvalues().tail(count).reverse();
  out.vectors = solver.eigenvectors().rightCols(count).rowwise().reverse();
  normalize_column_signs(out.vectors);
  return out;
}

Vector eigenvalues_descending(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_argument, "eigen: decomposition did not converge");
  }
  return solver.eigenvalues().reverse();
}

ThinSvd thin_svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

double largest_covariance_eigenvalue(const Matrix& x, int max_iter) {
  const double n = static_cast<double>(x.rows());
  // Start from the column norms: never orthogonal to a spike that raises the
  // diagonal, and deterministic.
  Vector v = x.colwise().norm().transpose();
  if (v.norm() == 0.0) return 0.0;
  v.normalize();
  double rayleigh = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector xv = x * v;
    Vector w = x.transpose() * xv / n;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 0 && std::abs(next - rayleigh) <= 1e-13 * std::abs(next)) return next;
    rayleigh = next;
  }
  return rayleigh;
}

}  // namespace spca
