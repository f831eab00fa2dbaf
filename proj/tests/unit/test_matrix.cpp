#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "spca/error.hpp"
#include "spca/linalg.hpp"
#include "spca/matrix.hpp"
#include "spca/matrix_io.hpp"
#include "spca/rng.hpp"

using namespace spca;

namespace {

Matrix gaussian(Index rows, Index cols, Seed seed) { return Rng(seed).normal_matrix(rows, cols); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected spca::Error";
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST(Matrix, SampleCovarianceMatchesDefinition) {
  const Matrix x = gaussian(40, 7, 1);
  const Matrix s = sample_covariance(x);
  Matrix want = Matrix::Zero(7, 7);
  for (Index i = 0; i < 40; ++i) want += x.row(i).transpose() * x.row(i) / 40.0;
  EXPECT_LT((s - want).norm(), 1e-12);
  EXPECT_EQ(s, s.transpose());
}

TEST(Matrix, CenteredCovarianceRemovesMean) {
  Matrix x = gaussian(50, 4, 2);
  x.rowwise() += Eigen::RowVectorXd::Constant(4, 5.0);
  const Matrix s = sample_covariance(x, true);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Matrix xc = x.rowwise() - mean;
  EXPECT_LT((s - xc.transpose() * xc / 50.0).norm(), 1e-12);
}

TEST(Matrix, NormsGramAndSelect) {
  const Matrix x = gaussian(9, 6, 3);
  EXPECT_LT((column_squared_norms(x) - x.colwise().squaredNorm().transpose()).norm(), 1e-12);
  EXPECT_LT((row_squared_norms(x) - x.rowwise().squaredNorm()).norm(), 1e-12);
  const IndexSet cols{1, 4};
  const Matrix g = gram_of_columns(x, cols, 9.0);
  Matrix sub(9, 2);
  sub << x.col(1), x.col(4);
  EXPECT_LT((g - sub.transpose() * sub / 9.0).norm(), 1e-12);
  const Matrix rows = select_rows(x, {5, 0});
  EXPECT_EQ(rows.row(0), x.row(5));
  EXPECT_EQ(rows.row(1), x.row(0));
}

TEST(Matrix, RequireFiniteRejectsNanAndEmpty) {
  Matrix x = Matrix::Ones(2, 2);
  EXPECT_NO_THROW(require_finite(x, "x"));
  x(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(kind_of([&] { require_finite(x, "x"); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([&] { require_finite(Matrix(0, 3), "x"); }), ErrorKind::invalid_argument);
}

TEST(Rng, SameSeedSameStream) {
  EXPECT_EQ(gaussian(5, 3, 42), gaussian(5, 3, 42));
  EXPECT_NE(gaussian(5, 3, 42), gaussian(5, 3, 43));
}

TEST(Rng, DeriveSeedIsOrderSensitive) {
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {0}), derive_seed(1, {}));
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  static_assert(mix64(0) != 0);
}

TEST(MatrixIo, RoundTripIsExact) {
  Matrix m = gaussian(6, 5, 7);
  m(0, 0) = 1e-300;
  m(1, 1) = -1.2345678901234567e200;
  m(2, 2) = 0.1;
  std::stringstream ss;
  write_matrix(ss, m);
  EXPECT_EQ(read_matrix(ss), m);
}

TEST(MatrixIo, HeaderFormat) {
  std::stringstream ss;
  write_matrix(ss, Matrix::Identity(2, 3));
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "# rows=2 cols=3");
}

TEST(MatrixIo, MalformedInputIsIoError) {
  for (const char* text : {"", "# rows=2 cols=2\n1 2\n3\n", "# rows=1 cols=2\n1 2 3\n",
                           "# rows=1 cols=1\nnan\n", "rows=1 cols=1\n1\n", "# rows=1 cols=1\nabc\n",
                           "# rows=2 cols=1\n1\n"}) {
    std::stringstream ss(text);
    EXPECT_EQ(kind_of([&] { read_matrix(ss); }), ErrorKind::io) << text;
  }
}

TEST(MatrixIo, FileRoundTripAndMissingFile) {
  const auto dir = std::filesystem::temp_directory_path() / "spca_matrix_io_test";
  std::filesystem::create_directories(dir);
  const Matrix m = gaussian(3, 4, 9);
  save_matrix(dir / "m", m);
  EXPECT_EQ(load_matrix(dir / "m"), m);
  EXPECT_EQ(kind_of([&] { load_matrix(dir / "missing"); }), ErrorKind::io);
  std::filesystem::remove_all(dir);
}

TEST(Linalg, LeadingEigenpairsDescendingAndSigned) {
  const Matrix a = gaussian(30, 8, 5);
  const Matrix s = a.transpose() * a;
  const EigenPairs e = leading_eigenpairs(s, 3);
  ASSERT_EQ(e.vectors.cols(), 3);
  EXPECT_GE(e.values(0), e.values(1));
  EXPECT_GE(e.values(1), e.values(2));
  for (Index k = 0; k < 3; ++k) {
    EXPECT_LT((s * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm(), 1e-9 * e.values(0));
    Index first = 0;
    while (std::abs(e.vectors(first, k)) <= 1e-12) ++first;
    EXPECT_GT(e.vectors(first, k), 0.0);
  }
}

TEST(Linalg, ThinSvdReconstructs) {
  const Matrix b = gaussian(20, 4, 6);
  const ThinSvd svd = thin_svd(b);
  EXPECT_LT((svd.left * svd.singular.asDiagonal() * svd.right.transpose() - b).norm(), 1e-12 * b.norm());
  EXPECT_LT((svd.left.transpose() * svd.left - Matrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(Linalg, PowerIterationMatchesDenseEigenvalue) {
  Matrix x = gaussian(100, 30, 8);
  x.col(3) *= 4.0;
  const double want = eigenvalues_descending(sample_covariance(x))(0);
  EXPECT_NEAR(largest_covariance_eigenvalue(x), want, 1e-9 * want);
}
