#include "spca/matrix.hpp"

#include <cmath>
#include <span>
#include <string>

#include "spca/error.hpp"
#include "spca/kernels.hpp"

namespace spca {
namespace {

std::span<const double> column(const Matrix& m, Index j) {
  return {m.data() + j * m.rows(), static_cast<std::size_t>(m.rows())};
}

}  // namespace

void require_finite(const Matrix& m, std::string_view what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + ": matrix must be non-empty");
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + ": matrix has non-finite entries");
  }
}

Matrix sample_covariance(const Matrix& x, bool center) {
  if (x.rows() < 1) throw Error(ErrorKind::invalid_argument, "sample_covariance: no rows");
  const double n = static_cast<double>(x.rows());
  if (center) {
    const Matrix centered = x.rowwise() - x.colwise().mean();
    Matrix s = Matrix::Zero(x.cols(), x.cols());
    s.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    return Matrix(s.selfadjointView<Eigen::Lower>()) / n;
  }
  Matrix s = Matrix::Zero(x.cols(), x.cols());
  s.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  return Matrix(s.selfadjointView<Eigen::Lower>()) / n;
}

Vector column_squared_norms(const Matrix& x) {
  Vector out(x.cols());
  for (Index j = 0; j < x.cols(); ++j) out(j) = kernels::sum_squares(column(x, j));
  return out;
}

Vector row_squared_norms(const Matrix& x) {
  Vector out = Vector::Zero(x.rows());
  std::span<double> acc{out.data(), static_cast<std::size_t>(out.size())};
  for (Index j = 0; j < x.cols(); ++j) kernels::accumulate_squares(acc, column(x, j));
  return out;
}

Matrix gram_of_columns(const Matrix& x, const IndexSet& columns, double scale) {
  const auto m = static_cast<Index>(columns.size());
  Matrix g(m, m);
  for (Index a = 0; a < m; ++a) {
    const auto ca = column(x, columns[a]);
    for (Index b = 0; b <= a; ++b) {
      const double v = kernels::dot(ca, column(x, columns[b])) / scale;
      g(a, b) = v;
      g(b, a) = v;
    }
  }
  return g;
}

Matrix transpose_times(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::dimension_mismatch, "transpose_times: row counts differ");
  }
  Matrix out(a.cols(), b.cols());
  for (Index k = 0; k < b.cols(); ++k) {
    const auto bk = column(b, k);
    for (Index j = 0; j < a.cols(); ++j) out(j, k) = kernels::dot(column(a, j), bk);
  }
  return out;
}

Matrix select_rows(const Matrix& m, const IndexSet& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace spca
