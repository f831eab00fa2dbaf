#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>

#include "spca/frame.hpp"
#include "spca/matrix.hpp"
#include "spca/regression.hpp"
#include "spca/rng.hpp"

namespace spca {

// ---------------------------------------------------------------------------
// Baseline

// Leading r eigenvectors of (1/n) X'X.
OrthonormalFrame regular_pca(const Matrix& x, Index r);

// ---------------------------------------------------------------------------
// Sample splitting with auxiliary noise

struct SplitSample {
  Matrix x0;  // X - Z~
  Matrix x1;  // X + Z~
};

// Z~ is n x p standard normal drawn from `seed` in column-major order.
SplitSample split_samples(const Matrix& x, Seed seed);

// Same split with a caller-supplied Z~ (used to inject zero or permuted noise).
SplitSample split_samples_with(const Matrix& x, const Matrix& z_tilde);

// ---------------------------------------------------------------------------
// Diagonal thresholding initialization

struct DiagThreshConfig {
  double alpha = 3.0;
  std::optional<double> m0;  // when absent, estimated from the data
  Index r = 1;

  void validate() const;
};

struct InitialEstimate {
  OrthonormalFrame v0;
  IndexSet j_set;        // ascending; includes fallback additions
  Vector diagonal;       // diag(S0)
  double threshold = 0;  // 2 (1 + alpha sqrt(log max(p, n) / n))
  bool fallback = false; // the screen kept fewer than r coordinates
};

// Noise variance of the split sample is 2; the threshold carries that factor.
double screening_threshold(double alpha, Index n, Index p);

// J = {j : s0_jj >= threshold}; V0 is zero off J and holds the r leading
// eigenvectors of S0_JJ on J. When |J| < r, J is topped up with the
// largest-diagonal coordinates (ties by ascending index) and `fallback` is set.
InitialEstimate diagonal_threshold_init(const Matrix& x0, const DiagThreshConfig& cfg);

// ---------------------------------------------------------------------------
// M0 and rank estimation

inline constexpr double kM0Ceiling = 1e6;

// log n / log(sigma_1(S0) - 2). Returns the ceiling when sigma_1(S0) - 2 <= 1,
// where any M0 satisfies log n >= M0 log lambda.
double estimate_m0_from_eigenvalue(double sigma1, Index n, double ceiling = kM0Ceiling);
double estimate_m0(const Matrix& s0, Index n, double ceiling = kM0Ceiling);
// Power iteration on the sample itself; avoids forming the p x p S0.
double estimate_m0_from_sample(const Matrix& x0, double ceiling = kM0Ceiling);

struct RankEstimate {
  Index r_hat = 0;
  IndexSet j_set;
  double threshold_used = 0.0;  // 2 (1 + delta_m)
  double delta_m = 0.0;
  double t_m = 0.0;
};

// t_m^2 = (2/n)((m+1) log(e p) + (1 + 2/M0) log n)
// delta_m = 2(sqrt(m/n) + t_m) + (sqrt(m/n) + t_m)^2
// r_hat = #{l : sigma_l(S0_JJ) > 2 (1 + delta_m)}, 0 when none clears.
RankEstimate estimate_rank(const Matrix& s0, const IndexSet& j_set, Index n, double m0);
// Same, from the already extracted block S0_JJ and the ambient dimension p.
RankEstimate estimate_rank_from_block(const Matrix& s0_jj, const IndexSet& j_set, Index p, Index n,
                                      double m0);

// ---------------------------------------------------------------------------
// Reduction to group-sparse regression

struct ReductionArtifacts {
  Matrix x0;
  Matrix x1;
  OrthonormalFrame v0;
  Matrix b;      // x0 v0, n x r
  Matrix l;      // n x r
  Matrix c;      // r x r diagonal
  Matrix r_mat;  // r x r
  Matrix y;      // (1/sqrt 2) x1' x0 v0 R C^{-1}, p x r
  Matrix theta_hat;
  OrthonormalFrame v_hat;
  IndexSet j_set;
  Index k_hat = 0;
  IndexSet kept_rows;
  bool init_fallback = false;
  bool rank_padded = false;
  std::optional<RankEstimate> rank;  // set when r was estimated
};

// Whitening precondition: sigma_r(B) > 1e-10 sigma_1(B).
inline constexpr double kWhiteningRatio = 1e-10;

// Runs split, initialization, whitening, group-sparse fit and final
// orthonormalization. X is divided by noise_sd first, so all thresholds are in
// unit-noise scale and the stored x0/x1 are too. Pass r = 0 to estimate the
// rank from the split sample. Throws ErrorKind::whitening_failed when B cannot
// be whitened.
ReductionArtifacts reduce_and_fit(const Matrix& x, Index r, const DiagThreshConfig& cfg,
                                  const PenaltyConfig& pen, Seed seed, double noise_sd = 1.0);

// As above with Z~ supplied (unit-noise scale).
ReductionArtifacts reduce_and_fit_with_noise(const Matrix& x, Index r, const DiagThreshConfig& cfg,
                                             const PenaltyConfig& pen, const Matrix& z_tilde,
                                             double noise_sd = 1.0);

// Pipeline on an already split sample; `init` is used for screening and V0,
// `response` for the regression. Swapping the two gives the second estimate
// of the symmetrized variant.
ReductionArtifacts reduce_split(const Matrix& init, const Matrix& response, Index r,
                                const DiagThreshConfig& cfg, const PenaltyConfig& pen);

struct SymmetrizedEstimate {
  OrthonormalFrame v_hat;
  OrthonormalFrame first;
  OrthonormalFrame second;
  bool init_fallback = false;
  bool rank_padded = false;
  std::optional<RankEstimate> rank;
};

// r leading eigenvectors of V1 V1' + V2 V2', where V2 comes from the same
// split with the roles of X0 and X1 exchanged.
SymmetrizedEstimate symmetrized_regspca_detailed(const Matrix& x, Index r,
                                                 const DiagThreshConfig& cfg,
                                                 const PenaltyConfig& pen, Seed seed,
                                                 double noise_sd = 1.0);

OrthonormalFrame symmetrized_regspca(const Matrix& x, Index r, const DiagThreshConfig& cfg,
                                     const PenaltyConfig& pen, Seed seed, double noise_sd = 1.0);

// r leading eigenvectors of A A' + B B' for two frames of equal rank.
OrthonormalFrame combine_frames(const OrthonormalFrame& a, const OrthonormalFrame& b);

// Writes x0, x1, v0, b, l, c, r, y, theta_hat, v_hat into `dir` (created if
// missing) in the matrix text format.
void save_artifacts(const std::filesystem::path& dir, const ReductionArtifacts& artifacts);

// ---------------------------------------------------------------------------
// Exhaustive aggregation over supports

struct AggregationConfig {
  Index support_size = 1;
  double max_supports = 1e6;
  Seed split_seed = 0;
  bool shuffle = false;  // false: first half of rows vs the rest
};

struct AggregationResult {
  OrthonormalFrame frame;
  IndexSet support;
  double score = 0.0;  // Tr(V_B' S_(2) V_B) at the winner
  std::uint64_t supports_examined = 0;
};

// C(p, k), saturating at +inf for values beyond double range.
double binomial_count(Index p, Index k);

// For every |B| = k: V_B = r leading eigenvectors of J_B S_(1) J_B; returns the
// V_B maximizing Tr(V_B' S_(2) V_B) (first in lexicographic order on ties).
// Throws ErrorKind::combinatorial_guard when C(p, k) exceeds max_supports.
AggregationResult aggregate_estimator_detailed(const Matrix& x, Index r,
                                               const AggregationConfig& agg);

OrthonormalFrame aggregate_estimator(const Matrix& x, Index r, const AggregationConfig& agg);

}  // namespace spca
