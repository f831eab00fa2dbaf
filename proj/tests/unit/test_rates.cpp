#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spca/error.hpp"
#include "spca/rates.hpp"
#include "spca/regression.hpp"

using namespace spca;

namespace {

SparsityClass make(double q, double s, Index p, Index r, double lambda) {
  return SparsityClass{.q = q, .s = s, .p = p, .r = r, .lambda = lambda, .kappa = 1.0};
}

}  // namespace

TEST(Rates, ClosedForms) {
  EXPECT_DOUBLE_EQ(signal_strength(1.0), 0.5);
  EXPECT_DOUBLE_EQ(signal_strength(10.0), 100.0 / 11.0);
  const double h = 100.0 / 11.0;
  const double l = std::log(std::exp(1.0) * 2000.0 / 40.0);
  EXPECT_NEAR(rate_psi(40, 2000, 5, 1000, 10.0), (5.0 * 40 + 40 * l) / (1000 * h), 1e-14);
  EXPECT_NEAR(rate_psi0(40, 2000, 5, 1000, 10.0), (5.0 * 35 + 40 * l) / (1000 * h), 1e-14);
}

TEST(Rates, QZeroGivesS) {
  for (double s : {1.0, 5.0, 40.0, 200.0}) {
    EXPECT_EQ(effective_dimension(make(0.0, s, 2000, 1, 10.0), 1000), static_cast<Index>(s));
  }
}

TEST(Rates, FigureDefaultsMatchIntegerScan) {
  // n h = 30 with n = 30 and h = 1, i.e. lambda the golden ratio.
  const double lambda = std::numbers::phi;
  ASSERT_NEAR(signal_strength(lambda), 1.0, 1e-14);
  const SparsityClass cls = make(0.8, 30.0, 100, 10, lambda);
  EXPECT_NO_THROW(cls.validate());
  EXPECT_EQ(effective_dimension(cls, 30), oracle::effective_dimension_scan(0.8, 30.0, 100, 10, 30, lambda));
}

TEST(Rates, AmbientBoundary) {
  const Index p = 200;
  const Index r = 2;
  const Index n = 50;
  const double lambda = 1.0;
  const double q = 1.0;
  const double h = signal_strength(lambda);
  const double edge = static_cast<double>(p) * std::pow((r + 1.0) / (n * h), q / 2.0);
  EXPECT_EQ(effective_dimension(make(q, edge * 1.0001, p, r, lambda), n), p);
  EXPECT_DOUBLE_EQ(effective_dimension_x(make(q, edge * 1.0001, p, r, lambda), n), static_cast<double>(p));
  EXPECT_LT(effective_dimension_x(make(q, edge * 0.999, p, r, lambda), n), static_cast<double>(p));
}

TEST(Rates, RandomClassesMatchScan) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double q = 1.99 * unit(rng);
    const Index p = 5 + static_cast<Index>(unit(rng) * 500);
    const Index r = 1 + static_cast<Index>(unit(rng) * std::min<Index>(p - 1, 10));
    const Index n = 1 + static_cast<Index>(unit(rng) * 2000);
    const double lambda = 0.1 + 50 * unit(rng);
    const double lo = (2 - q) / 2 * r;
    const double hi = std::pow(r, q / 2) * std::pow(p, (2 - q) / 2);
    const double s = lo + (hi - lo) * unit(rng);
    const SparsityClass cls = make(q, s, p, r, lambda);
    const Index k = effective_dimension(cls, n);
    EXPECT_EQ(k, oracle::effective_dimension_scan(q, s, p, r, n, lambda)) << "trial " << trial;
    EXPECT_GE(k, 1);
    EXPECT_LE(k, p);
    const RateReport rep = rate_report(cls, n);
    EXPECT_EQ(rep.k_q_star, k);
    EXPECT_EQ(rep.k_q_star, std::clamp<Index>(static_cast<Index>(std::ceil(rep.x_q)), 1, p));
    EXPECT_GE(rep.psi, 0.0);
    EXPECT_GE(rep.psi0, 0.0);
  }
}

TEST(Rates, KPrimeByScan) {
  const PenaltyConfig pen;
  for (double q : {0.0, 0.5, 1.2}) {
    const SparsityClass cls = make(q, 20.0, 300, 3, 5.0);
    Index want = 300;
    for (Index k = 1; k <= 300; ++k) {
      if (std::pow(oracle::t_k(k, 300, 3, pen.beta), q / 2) * k >= 20.0) {
        want = k;
        break;
      }
    }
    EXPECT_EQ(regression_effective_dimension(cls, pen), want) << q;
  }
  // q = 0 reduces to k >= s.
  EXPECT_EQ(regression_effective_dimension(make(0.0, 20.0, 300, 3, 5.0), pen), 20);
}

TEST(Rates, RadiusConstraint) {
  EXPECT_THROW(make(0.0, 0.5, 100, 1, 1.0).validate(), Error);
  EXPECT_THROW(make(0.0, 150.0, 100, 1, 1.0).validate(), Error);
  EXPECT_THROW(make(2.0, 5.0, 100, 1, 1.0).validate(), Error);
  EXPECT_THROW(make(0.5, 5.0, 100, 101, 1.0).validate(), Error);
  EXPECT_NO_THROW(make(1.0, 10.0, 100, 2, 1.0).validate());
  try {
    make(0.0, 0.5, 100, 1, 1.0).validate();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_config);
  }
}
