#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spca/matrix.hpp"
#include "spca/model.hpp"
#include "spca/rng.hpp"

namespace spca {

enum class EstimatorKind { regspca, regular_pca, aggregate };

std::string_view estimator_name(EstimatorKind kind);
// Throws ErrorKind::invalid_config on an unknown name.
EstimatorKind parse_estimator(std::string_view name);

enum class RowProfile { i4, flat };

struct ExperimentSpec {
  Index n = 1000;
  Index p = 2000;
  std::vector<Index> r_values{1, 5, 10, 20};
  std::vector<Index> s_values{40, 80, 120, 160, 200};
  double lambda_top = 20.0;
  double lambda_bottom = 10.0;
  double q = 0.0;
  double sigma = 1.0;
  std::vector<EstimatorKind> estimators{EstimatorKind::regspca};
  Index reps = 50;
  Seed master_seed = 20130101;
  // i4: row i (1-based) of the pre-orthonormalization matrix has variance
  // i^4 for i <= s; flat: variance 1.
  RowProfile row_variance_profile = RowProfile::i4;

  // Tuning constants for regspca.
  double alpha = 3.0;
  double beta = 2.1;
  double delta = 0.05;
  // Let regspca estimate r instead of being told; a wrong r_hat is recorded
  // as rank_mismatch.
  bool estimate_rank = false;

  // Guard for the aggregation estimator, C(p, k) <= max_supports.
  double max_supports = 1e6;

  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  // Throws ErrorKind::invalid_config, or ErrorKind::combinatorial_guard when
  // the aggregation estimator is requested on a grid cell it cannot enumerate.
  void validate() const;
};

enum class TrialStatus { ok, fallback_init, whitening_failed, rank_mismatch };

std::string_view status_name(TrialStatus status);

struct TrialRecord {
  EstimatorKind estimator = EstimatorKind::regspca;
  Index r = 0;
  Index s = 0;
  Index rep_index = 0;
  Seed seed = 0;
  double loss = 0.0;  // NaN when the estimator produced nothing
  double runtime_ms = 0.0;
  TrialStatus status = TrialStatus::ok;
};

// Seeding scheme. All seeds are pure functions of the spec and grid position:
//   trial seed  = derive_seed(master, {estimator index, r index, s index, rep})
//   data seed   = derive_seed(master ^ kDataTag, {r index, s index, rep})
//   truth seed  = derive_seed(data seed, {1})
//   sample seed = derive_seed(data seed, {2})
// The data seed omits the estimator, so every estimator in a cell sees the
// same truth and sample; the trial seed drives the estimator's own
// randomness (auxiliary noise, shuffles).
inline constexpr std::uint64_t kDataTag = 0x5eed0da7a0000001ULL;
Seed trial_seed(Seed master, std::size_t estimator_index, std::size_t r_index, std::size_t s_index,
                Index rep);
Seed data_seed(Seed master, std::size_t r_index, std::size_t s_index, Index rep);

// V = orthonormalize(M) where the first s rows of the p x r matrix M are
// drawn per the row profile and the rest are zero. Spikes are r equispaced
// values from lambda_top down to lambda_bottom (lambda_top alone when r = 1).
// A rank-deficient M is redrawn from an incremented seed; `redraws` counts
// those.
SpikedModel build_truth(const ExperimentSpec& spec, Index r, Index s, Seed seed,
                        int* redraws = nullptr);

std::vector<double> equispaced_spikes(Index r, double top, double bottom);

// Runs every (estimator, r, s, rep) trial, concurrently when threads > 1.
// Output order is the nested grid order regardless of scheduling.
std::vector<TrialRecord> run_grid(const ExperimentSpec& spec);

struct CellSummary {
  EstimatorKind estimator = EstimatorKind::regspca;
  Index r = 0;
  Index s = 0;
  std::size_t trials = 0;
  std::size_t counted = 0;  // ok or fallback_init with a finite loss
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t fallback_init = 0;
  std::size_t whitening_failed = 0;
  std::size_t rank_mismatch = 0;
};

struct Report {
  std::vector<CellSummary> cells;  // first-appearance order of (estimator, r, s)
};

// Means and standard errors over the counted trials of each cell. Whitening
// and rank failures are tallied but carry no loss.
Report summarize(const std::vector<TrialRecord>& records);

// Header: estimator,r,s,rep,seed,loss,runtime_ms,status
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const Report& report);
// One block per estimator, rows r, columns s, 4 decimals.
void write_table(std::ostream& out, const Report& report);

// Flat key=value config, '#' comments, comma-separated lists. Keys mirror the
// ExperimentSpec fields. Throws ErrorKind::invalid_config.
ExperimentSpec parse_experiment_spec(std::istream& in);
ExperimentSpec load_experiment_spec(const std::string& path);

}  // namespace spca
