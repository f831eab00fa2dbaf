#include "spca/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "spca/error.hpp"
#include "spca/geometry.hpp"
#include "spca/kernels.hpp"
#include "spca/linalg.hpp"
#include "spca/matrix_io.hpp"

namespace spca {
namespace {

void require_rank(Index r, Index p, const char* who) {
  if (r < 1 || r > p) {
    throw Error(ErrorKind::invalid_argument, std::string(who) + ": rank r=" + std::to_string(r) +
                                                 " must lie in [1, " + std::to_string(p) + "]");
  }
}

Matrix select_columns(const Matrix& x, const IndexSet& columns) {
  Matrix out(x.rows(), static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) out.col(static_cast<Index>(k)) = x.col(columns[k]);
  return out;
}

// Adds the largest-diagonal coordinates not yet in `set` until it has `target`
// members. Returns the set sorted ascending.
IndexSet top_up(IndexSet set, const Vector& diagonal, Index target) {
  if (static_cast<Index>(set.size()) < target) {
    std::vector<bool> member(static_cast<std::size_t>(diagonal.size()), false);
    for (Index j : set) member[static_cast<std::size_t>(j)] = true;
    for (Index j : rows_by_descending_norm(diagonal)) {
      if (static_cast<Index>(set.size()) >= target) break;
      if (!member[static_cast<std::size_t>(j)]) {
        set.push_back(j);
        member[static_cast<std::size_t>(j)] = true;
      }
    }
  }
  std::sort(set.begin(), set.end());
  return set;
}

IndexSet screen(const Vector& diagonal, double threshold) {
  IndexSet j_set;
  for (Index j = 0; j < diagonal.size(); ++j) {
    if (diagonal(j) >= threshold) j_set.push_back(j);
  }
  return j_set;
}

// Completes span(theta) to an r-frame with leading eigenvectors of S0
// restricted to supp(theta), widened by J and then by the largest diagonals
// when the support is too small to carry r directions.
OrthonormalFrame pad_to_rank(const Matrix& theta, const IndexSet& kept_rows, Index r,
                             const InitialEstimate& init_est, const Matrix& init) {
  const Index p = theta.rows();
  const double n = static_cast<double>(init.rows());

  Matrix basis(p, 0);
  if (theta.cwiseAbs().maxCoeff() > 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(theta);
    qr.setThreshold(1e-10);
    const Index rank = qr.rank();
    basis = qr.householderQ() * Matrix::Identity(p, rank);
  }

  IndexSet support = kept_rows;
  if (static_cast<Index>(support.size()) < r) {
    for (Index j : init_est.j_set) {
      if (!std::binary_search(kept_rows.begin(), kept_rows.end(), j)) support.push_back(j);
    }
  }
  support = top_up(std::move(support), init_est.diagonal, r);

  const Matrix block = gram_of_columns(init, support, n);
  const EigenPairs pairs = leading_eigenpairs(block, static_cast<Index>(support.size()));
  for (Index k = 0; k < pairs.vectors.cols() && basis.cols() < r; ++k) {
    Vector v = Vector::Zero(p);
    for (std::size_t i = 0; i < support.size(); ++i) v(support[i]) = pairs.vectors(static_cast<Index>(i), k);
    for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.transpose() * v);
    const double norm = v.norm();
    if (norm > 1e-6) {
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = v / norm;
    }
  }
  if (basis.cols() < r) {
    throw Error(ErrorKind::rank_deficient, "reduction: could not complete the estimate to rank " +
                                               std::to_string(r));
  }
  return orthonormalize(basis);
}

// Everything except storing the two samples.
ReductionArtifacts run_pipeline(const Matrix& init, const Matrix& response, Index r,
                                const DiagThreshConfig& cfg, const PenaltyConfig& pen) {
  cfg.validate();
  pen.validate();
  const Index n = init.rows();
  const Index p = init.cols();
  if (response.rows() != n || response.cols() != p) {
    throw Error(ErrorKind::dimension_mismatch, "reduction: split samples differ in shape");
  }

  std::optional<RankEstimate> rank;
  if (r == 0) {
    const double m0 = cfg.m0 ? *cfg.m0 : estimate_m0_from_sample(init);
    const Vector diagonal = column_squared_norms(init) / static_cast<double>(n);
    const IndexSet j_set = screen(diagonal, screening_threshold(cfg.alpha, n, p));
    RankEstimate est;
    if (!j_set.empty()) {
      est = estimate_rank_from_block(gram_of_columns(init, j_set, static_cast<double>(n)), j_set, p,
                                     n, m0);
    }
    if (est.r_hat == 0) {
      throw Error(ErrorKind::rank_deficient, "reduction: estimated rank is zero (no eigenvalue of "
                                             "S0_JJ clears the noise threshold)");
    }
    r = est.r_hat;
    rank = std::move(est);
  }
  require_rank(r, std::min(n, p), "reduce_and_fit");

  DiagThreshConfig init_cfg = cfg;
  init_cfg.r = r;
  InitialEstimate init_est = diagonal_threshold_init(init, init_cfg);

  // B = X0 V0, using only the rows of V0 on J.
  const Matrix v0_on_j = select_rows(init_est.v0.basis(), init_est.j_set);
  Matrix b = select_columns(init, init_est.j_set) * v0_on_j;
  ThinSvd svd = thin_svd(b);
  const double s_max = svd.singular(0);
  const double s_min = svd.singular(r - 1);
  if (!(s_min > kWhiteningRatio * s_max)) {
    throw Error(ErrorKind::whitening_failed,
                "reduction: B = X0 V0 is too close to rank deficient to whiten (sigma_r/sigma_1 = " +
                    std::to_string(s_max > 0 ? s_min / s_max : 0.0) + ")");
  }

  // Y = (1/sqrt 2) X1' X0 V0 R C^{-1} = (1/sqrt 2) X1' L
  Matrix y = transpose_times(response, svd.left) * (1.0 / std::numbers::sqrt2);
  GroupEstimate fit = fit_group_sparse(y, pen);

  bool padded = false;
  std::optional<OrthonormalFrame> v_hat;
  try {
    v_hat.emplace(orthonormalize(fit.theta_hat));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::rank_deficient) throw;
    v_hat.emplace(pad_to_rank(fit.theta_hat, fit.kept_rows, r, init_est, init));
    padded = true;
  }

  ReductionArtifacts out{
      .x0 = Matrix(),
      .x1 = Matrix(),
      .v0 = init_est.v0,
      .b = std::move(b),
      .l = std::move(svd.left),
      .c = svd.singular.asDiagonal(),
      .r_mat = std::move(svd.right),
      .y = std::move(y),
      .theta_hat = std::move(fit.theta_hat),
      .v_hat = std::move(*v_hat),
      .j_set = std::move(init_est.j_set),
      .k_hat = fit.k_hat,
      .kept_rows = std::move(fit.kept_rows),
      .init_fallback = init_est.fallback,
      .rank_padded = padded,
      .rank = std::move(rank),
  };
  return out;
}

Matrix rescaled(const Matrix& x, double noise_sd) {
  if (!(noise_sd > 0.0) || !std::isfinite(noise_sd)) {
    throw Error(ErrorKind::invalid_argument, "noise_sd must be positive");
  }
  if (noise_sd == 1.0) return x;
  return x / noise_sd;
}

}  // namespace

// ---------------------------------------------------------------------------

OrthonormalFrame regular_pca(const Matrix& x, Index r) {
  require_finite(x, "regular_pca");
  const Index n = x.rows();
  const Index p = x.cols();
  require_rank(r, p, "regular_pca");

  if (p > n && r <= n) {
    // Work with the n x n Gram matrix: v_k = X' u_k / sqrt(n mu_k).
    Matrix gram = Matrix::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
    gram /= static_cast<double>(n);
    const EigenPairs pairs = leading_eigenpairs(gram, r);
    if (pairs.values(r - 1) > 1e-10 * pairs.values(0)) {
      Matrix v = x.transpose() * pairs.vectors;
      for (Index k = 0; k < r; ++k) v.col(k) /= std::sqrt(static_cast<double>(n) * pairs.values(k));
      normalize_column_signs(v);
      return OrthonormalFrame(std::move(v));
    }
  }
  return OrthonormalFrame(leading_eigenpairs(sample_covariance(x), r).vectors);
}

SplitSample split_samples_with(const Matrix& x, const Matrix& z_tilde) {
  if (x.rows() != z_tilde.rows() || x.cols() != z_tilde.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "split_samples: noise shape differs from data");
  }
  SplitSample out{Matrix(x.rows(), x.cols()), Matrix(x.rows(), x.cols())};
  const auto size = static_cast<std::size_t>(x.size());
  kernels::split({x.data(), size}, {z_tilde.data(), size}, {out.x0.data(), size},
                 {out.x1.data(), size});
  return out;
}

SplitSample split_samples(const Matrix& x, Seed seed) {
  Rng rng(seed);
  return split_samples_with(x, rng.normal_matrix(x.rows(), x.cols()));
}

void DiagThreshConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::invalid_argument, "diagonal thresholding: alpha must be non-negative");
  }
  if (m0 && !(*m0 > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "diagonal thresholding: M0 must be positive");
  }
  if (r < 0) throw Error(ErrorKind::invalid_argument, "diagonal thresholding: negative rank");
}

double screening_threshold(double alpha, Index n, Index p) {
  const double pn = static_cast<double>(std::max(p, n));
  return 2.0 * (1.0 + alpha * std::sqrt(std::log(pn) / static_cast<double>(n)));
}

InitialEstimate diagonal_threshold_init(const Matrix& x0, const DiagThreshConfig& cfg) {
  cfg.validate();
  const Index n = x0.rows();
  const Index p = x0.cols();
  require_rank(cfg.r, p, "diagonal_threshold_init");

  Vector diagonal = column_squared_norms(x0) / static_cast<double>(n);
  const double threshold = screening_threshold(cfg.alpha, n, p);
  IndexSet j_set = screen(diagonal, threshold);
  const bool fallback = static_cast<Index>(j_set.size()) < cfg.r;
  if (fallback) j_set = top_up(std::move(j_set), diagonal, cfg.r);

  const Matrix block = gram_of_columns(x0, j_set, static_cast<double>(n));
  const EigenPairs pairs = leading_eigenpairs(block, cfg.r);
  Matrix v0 = Matrix::Zero(p, cfg.r);
  for (std::size_t i = 0; i < j_set.size(); ++i) v0.row(j_set[i]) = pairs.vectors.row(static_cast<Index>(i));

  return InitialEstimate{OrthonormalFrame(std::move(v0)), std::move(j_set), std::move(diagonal),
                         threshold, fallback};
}

double estimate_m0_from_eigenvalue(double sigma1, Index n, double ceiling) {
  const double gap = sigma1 - 2.0;
  if (!(gap > 1.0)) return ceiling;
  return std::min(std::log(static_cast<double>(n)) / std::log(gap), ceiling);
}

double estimate_m0(const Matrix& s0, Index n, double ceiling) {
  const Vector values = eigenvalues_descending(s0);
  return estimate_m0_from_eigenvalue(values(0), n, ceiling);
}

double estimate_m0_from_sample(const Matrix& x0, double ceiling) {
  return estimate_m0_from_eigenvalue(largest_covariance_eigenvalue(x0), x0.rows(), ceiling);
}

RankEstimate estimate_rank_from_block(const Matrix& s0_jj, const IndexSet& j_set, Index p, Index n,
                                      double m0) {
  if (j_set.empty()) throw Error(ErrorKind::invalid_argument, "estimate_rank: empty J");
  if (s0_jj.rows() != static_cast<Index>(j_set.size())) {
    throw Error(ErrorKind::dimension_mismatch, "estimate_rank: block size differs from |J|");
  }
  if (!(m0 > 0.0)) throw Error(ErrorKind::invalid_argument, "estimate_rank: M0 must be positive");
  const double nn = static_cast<double>(n);
  const double m = static_cast<double>(j_set.size());
  const double log_n = std::log(nn);
  const double log_ep = 1.0 + std::log(static_cast<double>(p));

  RankEstimate est;
  est.j_set = j_set;
  const double n_term = log_n > 0.0 ? (1.0 + 2.0 / m0) * log_n : 0.0;
  est.t_m = std::sqrt(2.0 / nn * ((m + 1.0) * log_ep + n_term));
  const double a = std::sqrt(m / nn) + est.t_m;
  est.delta_m = 2.0 * a + a * a;
  est.threshold_used = 2.0 * (1.0 + est.delta_m);

  const Vector values = eigenvalues_descending(s0_jj);
  est.r_hat = (values.array() > est.threshold_used).count();
  return est;
}

RankEstimate estimate_rank(const Matrix& s0, const IndexSet& j_set, Index n, double m0) {
  if (j_set.empty()) throw Error(ErrorKind::invalid_argument, "estimate_rank: empty J");
  return estimate_rank_from_block(s0(j_set, j_set), j_set, s0.rows(), n, m0);
}

ReductionArtifacts reduce_split(const Matrix& init, const Matrix& response, Index r,
                                const DiagThreshConfig& cfg, const PenaltyConfig& pen) {
  ReductionArtifacts out = run_pipeline(init, response, r, cfg, pen);
  out.x0 = init;
  out.x1 = response;
  return out;
}

ReductionArtifacts reduce_and_fit_with_noise(const Matrix& x, Index r, const DiagThreshConfig& cfg,
                                             const PenaltyConfig& pen, const Matrix& z_tilde,
                                             double noise_sd) {
  require_finite(x, "reduce_and_fit");
  SplitSample split = split_samples_with(rescaled(x, noise_sd), z_tilde);
  ReductionArtifacts out = run_pipeline(split.x0, split.x1, r, cfg, pen);
  out.x0 = std::move(split.x0);
  out.x1 = std::move(split.x1);
  return out;
}

ReductionArtifacts reduce_and_fit(const Matrix& x, Index r, const DiagThreshConfig& cfg,
                                  const PenaltyConfig& pen, Seed seed, double noise_sd) {
  Rng rng(seed);
  return reduce_and_fit_with_noise(x, r, cfg, pen, rng.normal_matrix(x.rows(), x.cols()), noise_sd);
}

OrthonormalFrame combine_frames(const OrthonormalFrame& a, const OrthonormalFrame& b) {
  if (a.p() != b.p() || a.r() != b.r()) {
    throw Error(ErrorKind::dimension_mismatch, "combine_frames: frames differ in shape");
  }
  const Index r = a.r();
  Matrix w(a.p(), 2 * r);
  w << a.basis(), b.basis();
  // Eigenvectors of W W' from the 2r x 2r Gram matrix; its r-th eigenvalue is
  // at least 1, so the back-transform is well conditioned.
  const EigenPairs pairs = leading_eigenpairs(w.transpose() * w, r);
  Matrix u = w * pairs.vectors;
  for (Index k = 0; k < r; ++k) u.col(k) /= std::sqrt(pairs.values(k));
  normalize_column_signs(u);
  return OrthonormalFrame(std::move(u));
}

SymmetrizedEstimate symmetrized_regspca_detailed(const Matrix& x, Index r,
                                                 const DiagThreshConfig& cfg,
                                                 const PenaltyConfig& pen, Seed seed,
                                                 double noise_sd) {
  require_finite(x, "symmetrized_regspca");
  const SplitSample split = split_samples(rescaled(x, noise_sd), seed);
  ReductionArtifacts first = run_pipeline(split.x0, split.x1, r, cfg, pen);
  ReductionArtifacts second = run_pipeline(split.x1, split.x0, first.v_hat.r(), cfg, pen);
  OrthonormalFrame combined = combine_frames(first.v_hat, second.v_hat);
  return SymmetrizedEstimate{std::move(combined),
                             std::move(first.v_hat),
                             std::move(second.v_hat),
                             first.init_fallback || second.init_fallback,
                             first.rank_padded || second.rank_padded,
                             std::move(first.rank)};
}

OrthonormalFrame symmetrized_regspca(const Matrix& x, Index r, const DiagThreshConfig& cfg,
                                     const PenaltyConfig& pen, Seed seed, double noise_sd) {
  return symmetrized_regspca_detailed(x, r, cfg, pen, seed, noise_sd).v_hat;
}

void save_artifacts(const std::filesystem::path& dir, const ReductionArtifacts& a) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
  save_matrix(dir / "x0", a.x0);
  save_matrix(dir / "x1", a.x1);
  save_matrix(dir / "v0", a.v0.basis());
  save_matrix(dir / "b", a.b);
  save_matrix(dir / "l", a.l);
  save_matrix(dir / "c", a.c);
  save_matrix(dir / "r", a.r_mat);
  save_matrix(dir / "y", a.y);
  save_matrix(dir / "theta_hat", a.theta_hat);
  save_matrix(dir / "v_hat", a.v_hat.basis());
}

}  // namespace spca
