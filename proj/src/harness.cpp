#include "spca/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "spca/error.hpp"
#include "spca/estimators.hpp"
#include "spca/geometry.hpp"
#include "spca/rates.hpp"

namespace spca {
namespace {

struct Trial {
  std::size_t estimator_index;
  std::size_t r_index;
  std::size_t s_index;
  Index rep;
};

TrialRecord run_trial(const ExperimentSpec& spec, const Trial& t) {
  const EstimatorKind kind = spec.estimators[t.estimator_index];
  const Index r = spec.r_values[t.r_index];
  const Index s = spec.s_values[t.s_index];

  TrialRecord rec;
  rec.estimator = kind;
  rec.r = r;
  rec.s = s;
  rec.rep_index = t.rep;
  rec.seed = trial_seed(spec.master_seed, t.estimator_index, t.r_index, t.s_index, t.rep);

  const Seed data = data_seed(spec.master_seed, t.r_index, t.s_index, t.rep);
  const SpikedModel truth = build_truth(spec, r, s, derive_seed(data, {1}));
  const Dataset sample = generate(truth, spec.n, derive_seed(data, {2}));

  const auto start = std::chrono::steady_clock::now();
  try {
    std::optional<OrthonormalFrame> estimate;
    switch (kind) {
      case EstimatorKind::regspca: {
        DiagThreshConfig init{.alpha = spec.alpha, .m0 = std::nullopt, .r = r};
        PenaltyConfig pen{.beta = spec.beta, .delta = spec.delta};
        SymmetrizedEstimate est = symmetrized_regspca_detailed(
            sample.x, spec.estimate_rank ? 0 : r, init, pen, rec.seed, spec.sigma);
        if (est.rank_padded || est.v_hat.r() != r) {
          rec.status = TrialStatus::rank_mismatch;
        } else if (est.init_fallback) {
          rec.status = TrialStatus::fallback_init;
        }
        estimate.emplace(std::move(est.v_hat));
        break;
      }
      case EstimatorKind::regular_pca:
        estimate.emplace(regular_pca(sample.x, r));
        break;
      case EstimatorKind::aggregate: {
        const SparsityClass cls{.q = spec.q,
                                .s = static_cast<double>(s),
                                .p = spec.p,
                                .r = r,
                                .lambda = spec.lambda_bottom / (spec.sigma * spec.sigma),
                                .kappa = spec.lambda_top / spec.lambda_bottom};
        const AggregationConfig agg{.support_size = std::max(effective_dimension(cls, spec.n / 2), r),
                                    .max_supports = spec.max_supports,
                                    .split_seed = rec.seed,
                                    .shuffle = false};
        estimate.emplace(aggregate_estimator(sample.x, r, agg));
        break;
      }
    }
    rec.loss = subspace_loss(*estimate, truth.frame(), RankPolicy::allow_different);
  } catch (const Error& e) {
    rec.loss = std::numeric_limits<double>::quiet_NaN();
    if (e.kind() == ErrorKind::whitening_failed) {
      rec.status = TrialStatus::whitening_failed;
    } else if (e.kind() == ErrorKind::rank_deficient) {
      rec.status = TrialStatus::rank_mismatch;
    } else {
      throw;
    }
  }
  rec.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::regspca:
      return "regspca";
    case EstimatorKind::regular_pca:
      return "regular_pca";
    case EstimatorKind::aggregate:
      return "aggregate";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "regspca") return EstimatorKind::regspca;
  if (name == "regular_pca") return EstimatorKind::regular_pca;
  if (name == "aggregate") return EstimatorKind::aggregate;
  throw Error(ErrorKind::invalid_config, "unknown estimator '" + std::string(name) + "'");
}

std::string_view status_name(TrialStatus status) {
  switch (status) {
    case TrialStatus::ok:
      return "ok";
    case TrialStatus::fallback_init:
      return "fallback_init";
    case TrialStatus::whitening_failed:
      return "whitening_failed";
    case TrialStatus::rank_mismatch:
      return "rank_mismatch";
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  auto bad = [](const std::string& msg) { return Error(ErrorKind::invalid_config, msg); };
  if (n < 1 || p < 1) throw bad("n and p must be positive");
  if (reps < 1) throw bad("reps must be at least 1");
  if (r_values.empty() || s_values.empty()) throw bad("r_values and s_values must be non-empty");
  if (estimators.empty()) throw bad("estimators must be non-empty");
  if (!(lambda_bottom > 0.0) || !(lambda_top >= lambda_bottom) || !std::isfinite(lambda_top)) {
    throw bad("need lambda_top >= lambda_bottom > 0");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw bad("sigma must be positive");
  if (!(q >= 0.0 && q < 2.0)) throw bad("q must lie in [0, 2)");
  if (!(alpha >= 0.0)) throw bad("alpha must be non-negative");
  if (!(beta > 2.0)) throw bad("beta must exceed 2");
  if (!(delta > 0.0 && delta < 1.0)) throw bad("delta must lie in (0, 1)");
  for (Index s : s_values) {
    if (s < 1 || s > p) throw bad("every s must lie in [1, p]");
  }
  for (Index r : r_values) {
    if (r < 1 || r > n) throw bad("every r must lie in [1, n]");
    for (Index s : s_values) {
      if (r > s) {
        throw bad("grid cell r=" + std::to_string(r) + ", s=" + std::to_string(s) +
                  " has r > s");
      }
    }
  }
  for (EstimatorKind kind : estimators) {
    if (kind != EstimatorKind::aggregate) continue;
    for (Index r : r_values) {
      for (Index s : s_values) {
        const SparsityClass cls{.q = q,
                                .s = static_cast<double>(s),
                                .p = p,
                                .r = r,
                                .lambda = lambda_bottom / (sigma * sigma),
                                .kappa = lambda_top / lambda_bottom};
        const Index k = std::max(effective_dimension(cls, n / 2), r);
        const double count = binomial_count(p, k);
        if (count > max_supports) {
          throw Error(ErrorKind::combinatorial_guard,
                      "aggregate: C(" + std::to_string(p) + ", " + std::to_string(k) +
                          ") supports exceeds the guard of " + std::to_string(max_supports));
        }
      }
    }
  }
}

Seed trial_seed(Seed master, std::size_t estimator_index, std::size_t r_index, std::size_t s_index,
                Index rep) {
  return derive_seed(master, {estimator_index, r_index, s_index, static_cast<std::uint64_t>(rep)});
}

Seed data_seed(Seed master, std::size_t r_index, std::size_t s_index, Index rep) {
  return derive_seed(master ^ kDataTag, {r_index, s_index, static_cast<std::uint64_t>(rep)});
}

std::vector<double> equispaced_spikes(Index r, double top, double bottom) {
  if (r == 1) return {top};
  std::vector<double> spikes(static_cast<std::size_t>(r));
  const double step = (top - bottom) / static_cast<double>(r - 1);
  for (Index i = 0; i < r; ++i) spikes[static_cast<std::size_t>(i)] = top - step * static_cast<double>(i);
  spikes.back() = bottom;
  return spikes;
}

SpikedModel build_truth(const ExperimentSpec& spec, Index r, Index s, Seed seed, int* redraws) {
  if (s < 1 || s > spec.p || r < 1 || r > s) {
    throw Error(ErrorKind::invalid_argument, "build_truth: need 1 <= r <= s <= p");
  }
  int attempts = 0;
  for (;; ++attempts) {
    Rng rng(seed + static_cast<Seed>(attempts));
    Matrix m = Matrix::Zero(spec.p, r);
    for (Index i = 0; i < s; ++i) {
      const double row = static_cast<double>(i + 1);
      const double sd = spec.row_variance_profile == RowProfile::i4 ? row * row : 1.0;
      for (Index k = 0; k < r; ++k) m(i, k) = sd * rng.normal();
    }
    try {
      OrthonormalFrame frame = orthonormalize(m);
      if (redraws != nullptr) *redraws = attempts;
      return SpikedModel(std::move(frame), equispaced_spikes(r, spec.lambda_top, spec.lambda_bottom),
                         spec.sigma);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::rank_deficient || attempts > 100) throw;
    }
  }
}

std::vector<TrialRecord> run_grid(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<Trial> trials;
  for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
    for (std::size_t ri = 0; ri < spec.r_values.size(); ++ri) {
      for (std::size_t si = 0; si < spec.s_values.size(); ++si) {
        for (Index rep = 0; rep < spec.reps; ++rep) trials.push_back({e, ri, si, rep});
      }
    }
  }

  std::vector<TrialRecord> records(trials.size());
  unsigned workers = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(trials.size())));

  if (workers == 1) {
    for (std::size_t i = 0; i < trials.size(); ++i) records[i] = run_trial(spec, trials[i]);
    return records;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < trials.size() && !failed; i = next++) {
          try {
            records[i] = run_trial(spec, trials[i]);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

}  // namespace spca
