#include "spca/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spca/error.hpp"

namespace spca {
namespace {

double log_ep_over(double k, Index p) { return 1.0 + std::log(static_cast<double>(p) / k); }

void require_n(Index n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "rates: n must be at least 1");
}

}  // namespace

void SparsityClass::validate() const {
  auto bad = [](const std::string& msg) { return Error(ErrorKind::invalid_config, msg); };
  if (!(q >= 0.0 && q < 2.0)) throw bad("sparsity class: q must lie in [0, 2)");
  if (!(s > 0.0) || !std::isfinite(s)) throw bad("sparsity class: s must be positive");
  if (p < 1 || r < 1 || r > p) throw bad("sparsity class: need 1 <= r <= p");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw bad("sparsity class: lambda must be positive");
  if (!(kappa >= 1.0)) throw bad("sparsity class: kappa must be at least 1");
  const double lower = (2.0 - q) / 2.0 * static_cast<double>(r);
  const double upper =
      std::pow(static_cast<double>(r), q / 2.0) * std::pow(static_cast<double>(p), (2.0 - q) / 2.0);
  const double slack = 1e-12 * std::max(1.0, upper);
  if (s < lower - slack || s > upper + slack) {
    throw bad("sparsity class: radius s=" + std::to_string(s) + " outside admissible range [" +
              std::to_string(lower) + ", " + std::to_string(upper) + "]");
  }
}

double signal_strength(double lambda) { return lambda * lambda / (lambda + 1.0); }

double rate_psi(Index k, Index p, Index r, Index n, double lambda) {
  require_n(n);
  const double kk = static_cast<double>(k);
  return (static_cast<double>(r) * kk + kk * log_ep_over(kk, p)) /
         (static_cast<double>(n) * signal_strength(lambda));
}

double rate_psi0(Index k, Index p, Index r, Index n, double lambda) {
  require_n(n);
  const double kk = static_cast<double>(k);
  return (static_cast<double>(r) * (kk - static_cast<double>(r)) + kk * log_ep_over(kk, p)) /
         (static_cast<double>(n) * signal_strength(lambda));
}

double effective_dimension_bound(double x, const SparsityClass& cls, Index n) {
  const double nh = static_cast<double>(n) * signal_strength(cls.lambda);
  return cls.s * std::pow(nh / (static_cast<double>(cls.r) + log_ep_over(x, cls.p)), cls.q / 2.0);
}

double effective_dimension_x(const SparsityClass& cls, Index n) {
  require_n(n);
  const double p = static_cast<double>(cls.p);
  if (cls.q == 0.0) return std::min(cls.s, p);
  if (effective_dimension_bound(p, cls, n) >= p) return p;

  double lo = 0.0;  // condition holds
  double hi = p;    // condition fails
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid <= effective_dimension_bound(mid, cls, n)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Index effective_dimension(const SparsityClass& cls, Index n) {
  const double x = effective_dimension_x(cls, n);
  const auto k = static_cast<Index>(std::ceil(x));
  return std::clamp<Index>(k, 1, cls.p);
}

Index regression_effective_dimension(const SparsityClass& cls, const PenaltyConfig& pen) {
  for (Index k = 1; k <= cls.p; ++k) {
    const double t = penalty_t(k, cls.p, cls.r, pen);
    if (std::pow(t, cls.q / 2.0) * static_cast<double>(k) >= cls.s) return k;
  }
  return cls.p;
}

RateReport rate_report(const SparsityClass& cls, Index n, const PenaltyConfig& pen) {
  cls.validate();
  pen.validate();
  require_n(n);
  RateReport rep;
  rep.h_lambda = signal_strength(cls.lambda);
  rep.x_q = effective_dimension_x(cls, n);
  rep.k_q_star = effective_dimension(cls, n);
  rep.psi = rate_psi(rep.k_q_star, cls.p, cls.r, n, cls.lambda);
  rep.psi0 = rate_psi0(std::max(rep.k_q_star, cls.r), cls.p, cls.r, n, cls.lambda);
  rep.k_prime = regression_effective_dimension(cls, pen);
  return rep;
}

}  // namespace spca
