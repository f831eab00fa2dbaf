#include "spca/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spca/error.hpp"

namespace spca {
namespace {

void check_compatible(const OrthonormalFrame& a, const OrthonormalFrame& b, RankPolicy policy) {
  if (a.p() != b.p()) {
    throw Error(ErrorKind::dimension_mismatch, "subspace_loss: frames live in different dimensions (" +
                                                   std::to_string(a.p()) + " vs " +
                                                   std::to_string(b.p()) + ")");
  }
  if (policy == RankPolicy::equal && a.r() != b.r()) {
    throw Error(ErrorKind::dimension_mismatch, "subspace_loss: frames have different ranks (" +
                                                   std::to_string(a.r()) + " vs " +
                                                   std::to_string(b.r()) + ")");
  }
}

}  // namespace

double subspace_loss(const OrthonormalFrame& a, const OrthonormalFrame& b, RankPolicy policy) {
  check_compatible(a, b, policy);
  const double cross = (b.basis().transpose() * a.basis()).squaredNorm();
  const double loss = static_cast<double>(a.r() + b.r()) - 2.0 * cross;
  return std::max(loss, 0.0);
}

double subspace_loss_dense(const OrthonormalFrame& a, const OrthonormalFrame& b) {
  check_compatible(a, b, RankPolicy::allow_different);
  return (a.projection() - b.projection()).squaredNorm();
}

IndexSet rows_by_descending_norm(const Vector& squared_norms) {
  IndexSet order(static_cast<std::size_t>(squared_norms.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return squared_norms(i) > squared_norms(j); });
  return order;
}

double weak_lq_radius(const Matrix& m, double q) {
  if (!(q >= 0.0 && q < 2.0)) {
    throw Error(ErrorKind::invalid_argument, "weak_lq_radius: q must lie in [0, 2)");
  }
  const Vector sq = row_squared_norms(m);
  if (q == 0.0) {
    return static_cast<double>((sq.array().sqrt() > 1e-12).count());
  }
  const IndexSet order = rows_by_descending_norm(sq);
  double radius = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const double norm = std::sqrt(sq(order[j]));
    radius = std::max(radius, static_cast<double>(j + 1) * std::pow(norm, q));
  }
  return radius;
}

OrthonormalFrame orthonormalize(const Matrix& m) {
  require_finite(m, "orthonormalize");
  const Index p = m.rows();
  const Index r = m.cols();
  if (r > p) throw Error(ErrorKind::rank_deficient, "orthonormalize: more columns than rows");

  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  // R shares its singular values with m, and is only r x r.
  const Matrix upper = qr.matrixR().topLeftCorner(r, r).triangularView<Eigen::Upper>();
  const Vector sv = Eigen::JacobiSVD<Matrix>(upper).singularValues();
  if (!(sv(r - 1) > 1e-10 * sv(0))) {
    throw Error(ErrorKind::rank_deficient,
                "orthonormalize: input is rank deficient (sigma_min/sigma_max = " +
                    std::to_string(sv(0) > 0 ? sv(r - 1) / sv(0) : 0.0) + ")");
  }
  Matrix q = qr.householderQ() * Matrix::Identity(p, r);
  normalize_column_signs(q);
  return OrthonormalFrame(std::move(q));
}

}  // namespace spca
