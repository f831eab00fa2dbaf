#pragma once

#include "spca/matrix.hpp"
#include "spca/regression.hpp"

namespace spca {

// Weak-l_q parameter class. The radius s must satisfy
//   (2 - q)/2 * r <= s <= r^{q/2} p^{(2 - q)/2}
// for the class to be neither empty nor all of O(p, r).
struct SparsityClass {
  double q = 0.0;
  double s = 1.0;
  Index p = 1;
  Index r = 1;
  double lambda = 1.0;  // lower bound on lambda_r (unit noise)
  double kappa = 1.0;

  // Throws ErrorKind::invalid_config on an out-of-range field or a radius
  // outside the admissible interval.
  void validate() const;
};

struct RateReport {
  double h_lambda = 0.0;
  double psi = 0.0;   // at k_q_star
  double psi0 = 0.0;  // at max(k_q_star, r)
  double x_q = 0.0;
  Index k_q_star = 1;
  Index k_prime = 1;
};

// lambda^2 / (lambda + 1)
double signal_strength(double lambda);

// (r k + k log(e p / k)) / (n h)
double rate_psi(Index k, Index p, Index r, Index n, double lambda);

// (r (k - r) + k log(e p / k)) / (n h)
double rate_psi0(Index k, Index p, Index r, Index n, double lambda);

// Right-hand side of the effective-dimension condition,
//   s * (n h / (r + log(e p / x)))^{q/2},  0 < x <= p.
double effective_dimension_bound(double x, const SparsityClass& cls, Index n);

// Largest x in [0, p] with x <= effective_dimension_bound(x). The ratio
// x / bound(x) is strictly increasing, so the set is an interval and is
// located by bisection to 1e-9.
double effective_dimension_x(const SparsityClass& cls, Index n);

// ceil(x_q) clamped to [1, p].
Index effective_dimension(const SparsityClass& cls, Index n);

// min{k in [p] : t_k^{q/2} k >= s}, or p when no k qualifies.
Index regression_effective_dimension(const SparsityClass& cls, const PenaltyConfig& pen);

RateReport rate_report(const SparsityClass& cls, Index n, const PenaltyConfig& pen = {});

}  // namespace spca
