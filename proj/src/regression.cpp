#include "spca/regression.hpp"

#include <cmath>
#include <string>

#include "spca/error.hpp"
#include "spca/geometry.hpp"

namespace spca {
namespace {

void check_k(Index k, Index p) {
  if (p < 1 || k < 1 || k > p) {
    throw Error(ErrorKind::invalid_argument,
                "penalty: k=" + std::to_string(k) + " outside [1, " + std::to_string(p) + "]");
  }
}

}  // namespace

void PenaltyConfig::validate() const {
  if (!(beta > 2.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::invalid_argument, "penalty: beta must exceed 2");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "penalty: delta must lie in (0, 1)");
  }
}

double penalty_t(Index k, Index p, Index r, const PenaltyConfig& cfg) {
  check_k(k, p);
  // log(e p / k) = 1 + log(p / k); exactly 1 at k = p.
  const double l = 1.0 + std::log(static_cast<double>(p) / static_cast<double>(k));
  const double rr = static_cast<double>(r);
  return rr + std::sqrt(2.0 * rr * cfg.beta * l) + cfg.beta * l;
}

std::vector<double> penalty_sequence(Index p, Index r, const PenaltyConfig& cfg) {
  std::vector<double> t(static_cast<std::size_t>(p));
  for (Index k = 1; k <= p; ++k) t[static_cast<std::size_t>(k - 1)] = penalty_t(k, p, r, cfg);
  return t;
}

double cumulative_penalty(Index k, Index p, Index r, const PenaltyConfig& cfg) {
  check_k(k, p);
  double sum = 0.0;
  for (Index i = 1; i <= k; ++i) sum += penalty_t(i, p, r, cfg);
  const double scale = (1.0 + cfg.delta) * (1.0 + cfg.delta);
  return scale * sum;
}

GroupEstimate fit_group_sparse(const Matrix& y, const PenaltyConfig& cfg) {
  cfg.validate();
  require_finite(y, "fit_group_sparse");
  const Index p = y.rows();
  const Index r = y.cols();
  const double scale = (1.0 + cfg.delta) * (1.0 + cfg.delta);

  const Vector sq = row_squared_norms(y);
  const IndexSet order = rows_by_descending_norm(sq);
  const std::vector<double> t = penalty_sequence(p, r, cfg);

  // objective(k) = pen(k) + sum_{i>k} ||y_(i)||^2
  //              = total + sum_{i<=k} [(1+delta)^2 t_i - ||y_(i)||^2]
  // so only the running partial sum matters; the first strict minimum wins.
  double running = 0.0;
  double best = 0.0;
  Index k_hat = 0;
  for (Index k = 1; k <= p; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    running += scale * t[i] - sq(order[i]);
    if (k == 1 || running < best) {
      best = running;
      k_hat = k;
    }
  }

  GroupEstimate est;
  est.k_hat = k_hat;
  est.theta_hat = Matrix::Zero(p, r);
  const double threshold = scale * t[static_cast<std::size_t>(k_hat - 1)];
  for (Index i = 0; i < p; ++i) {
    if (sq(i) > threshold) {
      est.kept_rows.push_back(i);
      est.theta_hat.row(i) = y.row(i);
    }
  }
  const Index support = std::max<Index>(static_cast<Index>(est.kept_rows.size()), 1);
  double pen = 0.0;
  for (Index i = 0; i < support; ++i) pen += scale * t[static_cast<std::size_t>(i)];
  est.objective_value = (y - est.theta_hat).squaredNorm() + pen;
  return est;
}

}  // namespace spca
