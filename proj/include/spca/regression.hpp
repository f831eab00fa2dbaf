#pragma once

#include <vector>

#include "spca/matrix.hpp"

namespace spca {

// Multivariate regression Y = Theta + E with identity design, white noise and
// row-sparse Theta, solved by penalized least squares with the complexity
// penalty pen(k) = (1 + delta)^2 * sum_{i <= k} t_i.

struct PenaltyConfig {
  double beta = 2.1;
  double delta = 0.05;

  // Throws ErrorKind::invalid_argument unless beta > 2 and 0 < delta < 1.
  void validate() const;
};

// t_k = r + sqrt(2 r beta log(e p / k)) + beta log(e p / k), 1 <= k <= p.
double penalty_t(Index k, Index p, Index r, const PenaltyConfig& cfg);

// (1 + delta)^2 * sum_{i <= k} t_i
double cumulative_penalty(Index k, Index p, Index r, const PenaltyConfig& cfg);

// t_1..t_p, index 0 holding t_1.
std::vector<double> penalty_sequence(Index p, Index r, const PenaltyConfig& cfg);

struct GroupEstimate {
  Matrix theta_hat;
  Index k_hat = 1;
  IndexSet kept_rows;  // ascending
  // ||Y - Theta_hat||_F^2 + pen(max(|kept_rows|, 1)); diagnostic only.
  double objective_value = 0.0;
};

// k_hat is the smallest minimizer over k in [p] of
//   pen(k) + sum_{i > k} ||y_(i)||^2
// with rows ordered by descending norm (ties by ascending index). Row i of Y is
// kept verbatim iff ||y_i||^2 > (1 + delta)^2 t_{k_hat}; other rows are zeroed.
GroupEstimate fit_group_sparse(const Matrix& y, const PenaltyConfig& cfg);

}  // namespace spca
