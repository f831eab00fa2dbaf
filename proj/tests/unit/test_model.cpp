#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spca/error.hpp"
#include "spca/geometry.hpp"
#include "spca/matrix.hpp"
#include "spca/model.hpp"

using namespace spca;

namespace {

OrthonormalFrame axes(Index p, Index r) { return OrthonormalFrame(Matrix::Identity(p, r)); }

}  // namespace

TEST(Frame, RejectsNonOrthonormalAndWideBases) {
  Matrix m = Matrix::Identity(3, 2);
  m(0, 1) = 1e-6;
  EXPECT_THROW(OrthonormalFrame{m}, Error);
  EXPECT_THROW(OrthonormalFrame{Matrix::Identity(2, 3)}, Error);
  EXPECT_NO_THROW(OrthonormalFrame{Matrix::Identity(3, 3)});
}

TEST(Frame, SignNormalizationFlipsLeadingEntry) {
  Matrix m(3, 2);
  m << 0, -1, -1, 0, 0, 0;
  normalize_column_signs(m);
  EXPECT_EQ(m(1, 0), 1.0);
  EXPECT_EQ(m(0, 1), 1.0);
}

TEST(SpikedModel, ValidatesSpikes) {
  EXPECT_THROW(SpikedModel(axes(3, 2), {1.0, 2.0}), Error);
  EXPECT_THROW(SpikedModel(axes(3, 2), {1.0}), Error);
  EXPECT_THROW(SpikedModel(axes(3, 1), {0.0}), Error);
  EXPECT_THROW(SpikedModel(axes(3, 1), {}), Error);
  const SpikedModel m(axes(3, 2), {6.0, 2.0});
  EXPECT_DOUBLE_EQ(m.condition_ratio(), 3.0);
  EXPECT_DOUBLE_EQ(m.spike_scale()(0, 0), std::sqrt(6.0));
}

TEST(SpikedModel, CovarianceClosedForms) {
  Matrix want = Matrix::Zero(2, 2);
  want.diagonal() << 4, 1;
  EXPECT_EQ(covariance_of(SpikedModel(axes(2, 1), {3.0})), want);

  Matrix want3 = Matrix::Zero(3, 3);
  want3.diagonal() << 6, 5, 4;
  EXPECT_LT((covariance_of(SpikedModel(axes(3, 2), {2.0, 1.0}, 2.0)) - want3).norm(), 1e-14);
}

TEST(SpikedModel, CovarianceSpectrum) {
  std::mt19937_64 rng(3);
  const SpikedModel m(OrthonormalFrame(oracle::random_frame(rng, 6, 2)), {5.0, 2.0}, 1.5);
  Eigen::SelfAdjointEigenSolver<Matrix> es(covariance_of(m));
  const Vector ev = es.eigenvalues();
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev(i), 2.25, 1e-12);
  EXPECT_NEAR(ev(4), 4.25, 1e-12);
  EXPECT_NEAR(ev(5), 7.25, 1e-12);
}

TEST(Generate, DeterministicAndReconstructsFromLatents) {
  std::mt19937_64 rng(4);
  const SpikedModel m(OrthonormalFrame(oracle::random_frame(rng, 8, 3)), {9.0, 4.0, 1.0}, 0.7);
  const Dataset a = generate(m, 25, 99, true);
  const Dataset b = generate(m, 25, 99, true);
  EXPECT_EQ(a.x, b.x);
  ASSERT_TRUE(a.latent_u && a.latent_z);
  const Matrix rebuilt = *a.latent_u * m.spike_scale() * m.frame().basis().transpose() + 0.7 * *a.latent_z;
  EXPECT_LT((rebuilt - a.x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_FALSE(generate(m, 25, 99).latent_u.has_value());
  EXPECT_NE(generate(m, 25, 100).x, a.x);
}

TEST(Generate, NoiselessIsExactlyLowRank) {
  const SpikedModel m(axes(4, 1), {4.0}, 0.0);
  const Dataset d = generate(m, 10, 5, true);
  for (Index j = 1; j < 4; ++j) EXPECT_EQ(d.x.col(j).norm(), 0.0);
  EXPECT_EQ(d.x.col(0), Vector(2.0 * d.latent_u->col(0)));
}

TEST(Generate, LargeSampleCovarianceConverges) {
  const SpikedModel m(OrthonormalFrame(Matrix(Eigen::Vector3d(0.6, 0.8, 0.0))), {3.0});
  const Matrix s = sample_covariance(generate(m, 50000, 17).x);
  EXPECT_LT((s - covariance_of(m)).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Generate, MeanCovarianceOverReplications) {
  std::mt19937_64 rng(5);
  const SpikedModel m(OrthonormalFrame(oracle::random_frame(rng, 10, 2)), {8.0, 3.0});
  Matrix mean = Matrix::Zero(10, 10);
  for (int rep = 0; rep < 200; ++rep) mean += sample_covariance(generate(m, 500, 1000 + rep).x) / 200.0;
  const Matrix sigma = covariance_of(m);
  EXPECT_LT((mean - sigma).norm() / sigma.norm(), 0.05);
}
