#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "spca/error.hpp"
#include "spca/rates.hpp"
#include "spca/regression.hpp"
#include "spca/rng.hpp"

using namespace spca;

namespace {

// Row-sparse signal plus standard normal noise; signal rows are scaled so the
// selected k varies across instances.
Matrix planted(std::mt19937_64& rng, Index p, Index r) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix y(p, r);
  for (Index i = 0; i < y.size(); ++i) y.data()[i] = g(rng);
  const Index k = static_cast<Index>(u(rng) * static_cast<double>(p));
  const double amp = 1.0 + 8.0 * u(rng);
  for (Index i = 0; i < k; ++i) y.row(std::uniform_int_distribution<Index>(0, p - 1)(rng)) *= amp;
  return y;
}

}  // namespace

TEST(Penalty, SequenceMatchesDefinition) {
  const PenaltyConfig cfg;
  const auto t = penalty_sequence(50, 3, cfg);
  ASSERT_EQ(t.size(), 50u);
  double sum = 0.0;
  for (Index k = 1; k <= 50; ++k) {
    EXPECT_NEAR(t[static_cast<std::size_t>(k - 1)], oracle::t_k(k, 50, 3, 2.1), 1e-12);
    EXPECT_NEAR(penalty_t(k, 50, 3, cfg), oracle::t_k(k, 50, 3, 2.1), 1e-12);
    sum += oracle::t_k(k, 50, 3, 2.1);
    EXPECT_NEAR(cumulative_penalty(k, 50, 3, cfg), 1.05 * 1.05 * sum, 1e-9);
    if (k > 1) EXPECT_LT(t[static_cast<std::size_t>(k - 1)], t[static_cast<std::size_t>(k - 2)]);
  }
}

TEST(Penalty, Validation) {
  EXPECT_THROW((PenaltyConfig{.beta = 2.0, .delta = 0.05}.validate()), Error);
  EXPECT_THROW((PenaltyConfig{.beta = 2.1, .delta = 0.0}.validate()), Error);
  EXPECT_THROW((PenaltyConfig{.beta = 2.1, .delta = 1.0}.validate()), Error);
  EXPECT_NO_THROW(PenaltyConfig{}.validate());
}

TEST(GroupSparse, ZeroResponse) {
  const GroupEstimate e = fit_group_sparse(Matrix::Zero(10, 2), {});
  EXPECT_EQ(e.k_hat, 1);
  EXPECT_TRUE(e.kept_rows.empty());
  EXPECT_EQ(e.theta_hat, Matrix(Matrix::Zero(10, 2)));
}

TEST(GroupSparse, SingleLargeRow) {
  Matrix y = Matrix::Zero(3, 1);
  y(0, 0) = 10.0;
  const GroupEstimate e = fit_group_sparse(y, {});
  EXPECT_EQ(e.k_hat, 1);
  EXPECT_EQ(e.kept_rows, (IndexSet{0}));
  EXPECT_EQ(e.theta_hat, y);
  const auto want = oracle::regression_by_k_scan(y, 2.1, 0.05);
  EXPECT_EQ(want.k_hat, 1);
}

TEST(GroupSparse, MatchesKScanOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const Index p = std::uniform_int_distribution<Index>(1, 50)(rng);
    const Index r = std::uniform_int_distribution<Index>(1, 5)(rng);
    const Matrix y = planted(rng, p, r);
    const GroupEstimate e = fit_group_sparse(y, {});
    const auto want = oracle::regression_by_k_scan(y, 2.1, 0.05);
    ASSERT_EQ(e.k_hat, want.k_hat) << "trial " << trial;
    ASSERT_EQ(e.kept_rows, IndexSet(want.kept.begin(), want.kept.end())) << "trial " << trial;
    for (Index i = 0; i < p; ++i) {
      const bool kept = std::binary_search(e.kept_rows.begin(), e.kept_rows.end(), i);
      EXPECT_EQ(e.theta_hat.row(i), kept ? Matrix(y.row(i)) : Matrix(Matrix::Zero(1, r)));
    }
  }
}

TEST(GroupSparse, AgreesWithSubsetEnumeration) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Index p = std::uniform_int_distribution<Index>(1, 12)(rng);
    const Index r = std::uniform_int_distribution<Index>(1, 3)(rng);
    const Matrix y = planted(rng, p, r);
    const GroupEstimate e = fit_group_sparse(y, {});
    const auto [subset, value] = oracle::regression_by_subsets(y, 2.1, 0.05);
    // The best subset always holds k_hat rows; the threshold rule drops the
    // top row only when k_hat = 1 and that row is below (1 + delta)^2 t_1.
    EXPECT_EQ(static_cast<Index>(subset.size()), e.k_hat) << "trial " << trial;
    if (!e.kept_rows.empty()) {
      EXPECT_EQ(e.kept_rows, IndexSet(subset.begin(), subset.end())) << "trial " << trial;
      EXPECT_NEAR(e.objective_value, value, 1e-9 * (1.0 + value));
    } else {
      EXPECT_EQ(e.k_hat, 1);
    }
  }
}

TEST(GroupSparse, OrderingProperty) {
  std::mt19937_64 rng(43);
  const PenaltyConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const Index p = std::uniform_int_distribution<Index>(2, 40)(rng);
    const Index r = std::uniform_int_distribution<Index>(1, 4)(rng);
    const Matrix y = planted(rng, p, r);
    const GroupEstimate e = fit_group_sparse(y, cfg);
    Vector norms = y.rowwise().squaredNorm();
    std::sort(norms.data(), norms.data() + p, std::greater<>());
    if (e.k_hat < p) {
      EXPECT_LE(norms(e.k_hat), 1.05 * 1.05 * penalty_t(e.k_hat + 1, p, r, cfg) + 1e-12);
    }
    EXPECT_LE(static_cast<Index>(e.kept_rows.size()), e.k_hat);
  }
}

TEST(GroupSparse, RejectsNonFinite) {
  Matrix y = Matrix::Ones(3, 2);
  y(1, 1) = std::nan("");
  EXPECT_THROW(fit_group_sparse(y, {}), Error);
}

TEST(GroupSparse, RowPermutationEquivariance) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const Index p = std::uniform_int_distribution<Index>(2, 30)(rng);
    const Matrix y = planted(rng, p, 2);
    std::vector<Index> perm(static_cast<std::size_t>(p));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix shuffled(p, 2);
    for (Index i = 0; i < p; ++i) shuffled.row(i) = y.row(perm[static_cast<std::size_t>(i)]);
    const GroupEstimate a = fit_group_sparse(y, {});
    const GroupEstimate b = fit_group_sparse(shuffled, {});
    EXPECT_EQ(a.k_hat, b.k_hat);
    for (Index i = 0; i < p; ++i) EXPECT_EQ(b.theta_hat.row(i), a.theta_hat.row(perm[static_cast<std::size_t>(i)]));
  }
}

TEST(GroupSparse, GrowingAKeptRowKeepsIt) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix y = planted(rng, 25, 3);
    const GroupEstimate base = fit_group_sparse(y, {});
    for (Index row : base.kept_rows) {
      Matrix grown = y;
      grown.row(row) *= 1.0 + 3.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const GroupEstimate e = fit_group_sparse(grown, {});
      EXPECT_TRUE(std::binary_search(e.kept_rows.begin(), e.kept_rows.end(), row));
    }
  }
}

TEST(GroupSparse, RiskWithinRateFactor) {
  const Index p = 200;
  const Index r = 3;
  const Index s = 10;
  const PenaltyConfig pen;
  const SparsityClass cls{.q = 0.0, .s = static_cast<double>(s), .p = p, .r = r, .lambda = 1.0, .kappa = 1.0};
  const Index kp = regression_effective_dimension(cls, pen);
  ASSERT_EQ(kp, s);
  const double rate = kp * (r + std::log(std::exp(1.0) * p / static_cast<double>(kp)));

  Matrix theta = Matrix::Zero(p, r);
  for (Index i = 0; i < s; ++i) theta.row(i).setConstant(2.0 + i);
  double risk = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix y = theta + Rng(static_cast<Seed>(rep) + 300).normal_matrix(p, r);
    risk += (fit_group_sparse(y, pen).theta_hat - theta).squaredNorm() / 100.0;
  }
  EXPECT_GT(risk, rate / 10.0);
  EXPECT_LT(risk, rate * 10.0);
}
