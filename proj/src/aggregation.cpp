#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "spca/error.hpp"
#include "spca/estimators.hpp"
#include "spca/linalg.hpp"

namespace spca {

double binomial_count(Index p, Index k) {
  if (k < 0 || k > p) return 0.0;
  k = std::min(k, p - k);
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) {
    c = c * static_cast<double>(p - k + i) / static_cast<double>(i);
    if (!std::isfinite(c)) return INFINITY;
  }
  return std::round(c);
}

AggregationResult aggregate_estimator_detailed(const Matrix& x, Index r,
                                               const AggregationConfig& agg) {
  require_finite(x, "aggregate_estimator");
  const Index total = x.rows();
  const Index p = x.cols();
  const Index k = agg.support_size;
  if (k < 1 || k > p) {
    throw Error(ErrorKind::invalid_argument, "aggregate_estimator: support size must lie in [1, p]");
  }
  if (r < 1 || r > k) {
    throw Error(ErrorKind::invalid_argument, "aggregate_estimator: need 1 <= r <= support size");
  }
  if (total < 2) throw Error(ErrorKind::invalid_argument, "aggregate_estimator: need at least 2 rows");

  const double count = binomial_count(p, k);
  if (count > agg.max_supports) {
    std::ostringstream msg;
    msg << "aggregate_estimator: C(" << p << ", " << k << ") = " << count
        << " supports exceeds the guard of " << agg.max_supports;
    throw Error(ErrorKind::combinatorial_guard, msg.str());
  }

  std::vector<Index> rows(static_cast<std::size_t>(total));
  std::iota(rows.begin(), rows.end(), Index{0});
  if (agg.shuffle) {
    std::mt19937_64 engine(agg.split_seed);
    std::shuffle(rows.begin(), rows.end(), engine);
  }
  const Index half = total / 2;
  const IndexSet first(rows.begin(), rows.begin() + half);
  const IndexSet second(rows.begin() + half, rows.end());
  const Matrix s1 = sample_covariance(select_rows(x, first));
  const Matrix s2 = sample_covariance(select_rows(x, second));

  IndexSet support(static_cast<std::size_t>(k));
  std::iota(support.begin(), support.end(), Index{0});

  AggregationResult best{OrthonormalFrame(Matrix::Identity(p, r)), {}, -INFINITY, 0};
  Matrix best_vectors;
  std::uint64_t examined = 0;
  while (true) {
    const EigenPairs pairs = leading_eigenpairs(s1(support, support), r);
    const Matrix s2_block = s2(support, support);
    const double score = (pairs.vectors.transpose() * s2_block * pairs.vectors).trace();
    ++examined;
    if (score > best.score) {
      best.score = score;
      best.support = support;
      best_vectors = pairs.vectors;
    }

    // Next k-subset of [p] in lexicographic order.
    Index i = k - 1;
    while (i >= 0 && support[static_cast<std::size_t>(i)] == p - k + i) --i;
    if (i < 0) break;
    ++support[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  Matrix v = Matrix::Zero(p, r);
  for (std::size_t i = 0; i < best.support.size(); ++i) {
    v.row(best.support[i]) = best_vectors.row(static_cast<Index>(i));
  }
  best.frame = OrthonormalFrame(std::move(v));
  best.supports_examined = examined;
  return best;
}

OrthonormalFrame aggregate_estimator(const Matrix& x, Index r, const AggregationConfig& agg) {
  return aggregate_estimator_detailed(x, r, agg).frame;
}

}  // namespace spca
