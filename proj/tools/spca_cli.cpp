// spca: simulate spiked data, run the subspace estimators, benchmark grids and
// print rate diagnostics.
//
// Exit codes: 0 success, 1 estimation failure, 2 invalid arguments or config,
// 3 combinatorial guard exceeded, 4 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "spca/error.hpp"
#include "spca/estimators.hpp"
#include "spca/geometry.hpp"
#include "spca/harness.hpp"
#include "spca/kernels.hpp"
#include "spca/matrix_io.hpp"
#include "spca/model.hpp"
#include "spca/rates.hpp"

namespace fs = std::filesystem;
using namespace spca;

namespace {

enum ExitCode : int {
  kOk = 0,
  kEstimationFailed = 1,
  kInvalidConfig = 2,
  kGuardExceeded = 3,
  kIoError = 4,
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::invalid_config:
      return kInvalidConfig;
    case ErrorKind::combinatorial_guard:
      return kGuardExceeded;
    case ErrorKind::io:
      return kIoError;
    case ErrorKind::rank_deficient:
    case ErrorKind::whitening_failed:
      return kEstimationFailed;
  }
  return kEstimationFailed;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot open for writing: " + path.string());
  return out;
}

struct SimulateArgs {
  Index n = 1000;
  Index p = 2000;
  Index r = 1;
  Index s = 40;
  double lambda_top = 20.0;
  double lambda_bottom = 10.0;
  double sigma = 1.0;
  Seed seed = 1;
  std::string profile = "i4";
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  ExperimentSpec spec;
  spec.n = a.n;
  spec.p = a.p;
  spec.r_values = {a.r};
  spec.s_values = {a.s};
  spec.lambda_top = a.lambda_top;
  spec.lambda_bottom = a.lambda_bottom;
  spec.sigma = a.sigma;
  spec.row_variance_profile = a.profile == "flat" ? RowProfile::flat : RowProfile::i4;
  spec.validate();

  const SpikedModel truth = build_truth(spec, a.r, a.s, derive_seed(a.seed, {1}));
  const Dataset data = generate(truth, a.n, derive_seed(a.seed, {2}));

  const fs::path dir(a.out);
  ensure_dir(dir);
  save_matrix(dir / "x", data.x);
  save_matrix(dir / "v", truth.frame().basis());
  Matrix spikes(1, truth.r());
  for (Index i = 0; i < truth.r(); ++i) spikes(0, i) = truth.spikes()[static_cast<std::size_t>(i)];
  save_matrix(dir / "spikes", spikes);
  std::cout << "wrote " << (dir / "x").string() << " (" << a.n << " x " << a.p << "), "
            << (dir / "v").string() << " and " << (dir / "spikes").string() << '\n';
  return kOk;
}

struct EstimateArgs {
  std::string method = "regspca";
  Index r = 1;
  std::string in;
  std::string out;
  double alpha = 3.0;
  double beta = 2.1;
  double delta = 0.05;
  double sigma = 1.0;
  std::optional<Index> k;
  Seed seed = 1;
  std::string variant = "symmetrized";
  double max_supports = 1e6;
  bool shuffle = false;
  std::string truth;
};

int run_estimate(const EstimateArgs& a) {
  const Matrix x = load_matrix(a.in);
  const fs::path dir(a.out);
  ensure_dir(dir);

  std::optional<OrthonormalFrame> v_hat;
  const EstimatorKind kind = parse_estimator(a.method);
  switch (kind) {
    case EstimatorKind::regspca: {
      const DiagThreshConfig init{.alpha = a.alpha, .m0 = std::nullopt, .r = a.r};
      const PenaltyConfig pen{.beta = a.beta, .delta = a.delta};
      ReductionArtifacts art = reduce_and_fit(x, a.r, init, pen, a.seed, a.sigma);
      save_artifacts(dir / "artifacts", art);
      std::cout << "screened |J| = " << art.j_set.size() << (art.init_fallback ? " (fallback)" : "")
                << ", k_hat = " << art.k_hat << ", kept rows = " << art.kept_rows.size()
                << (art.rank_padded ? ", rank padded" : "") << '\n';
      if (art.rank) {
        std::cout << "estimated rank r_hat = " << art.rank->r_hat << " (threshold "
                  << art.rank->threshold_used << ")\n";
      }
      if (a.variant == "single") {
        v_hat.emplace(std::move(art.v_hat));
      } else {
        v_hat.emplace(symmetrized_regspca(x, art.v_hat.r(), init, pen, a.seed, a.sigma));
      }
      break;
    }
    case EstimatorKind::regular_pca:
      v_hat.emplace(regular_pca(x, a.r));
      break;
    case EstimatorKind::aggregate: {
      if (!a.k) throw Error(ErrorKind::invalid_config, "aggregate needs --k (support size)");
      const AggregationConfig agg{.support_size = *a.k,
                                  .max_supports = a.max_supports,
                                  .split_seed = a.seed,
                                  .shuffle = a.shuffle};
      AggregationResult res = aggregate_estimator_detailed(x, a.r, agg);
      std::cout << "selected support:";
      for (Index j : res.support) std::cout << ' ' << j + 1;
      std::cout << " (score " << res.score << ", " << res.supports_examined << " supports)\n";
      v_hat.emplace(std::move(res.frame));
      break;
    }
  }
  save_matrix(dir / "v_hat", v_hat->basis());
  std::cout << "wrote " << (dir / "v_hat").string() << '\n';
  if (!a.truth.empty()) {
    const OrthonormalFrame truth(load_matrix(a.truth), 1e-8);
    std::cout << "loss vs truth: " << std::setprecision(6)
              << subspace_loss(*v_hat, truth, RankPolicy::allow_different) << '\n';
  }
  return kOk;
}

int run_benchmark(const std::string& spec_path, const std::string& out, std::optional<unsigned> threads) {
  ExperimentSpec spec = load_experiment_spec(spec_path);
  if (threads) spec.threads = *threads;
  spec.validate();
  const auto records = run_grid(spec);
  const Report report = summarize(records);

  const fs::path dir(out);
  ensure_dir(dir);
  {
    auto f = open_out(dir / "records.csv");
    write_records_csv(f, records);
  }
  {
    auto f = open_out(dir / "summary.csv");
    write_summary_csv(f, report);
  }
  {
    auto f = open_out(dir / "table.txt");
    write_table(f, report);
  }
  write_table(std::cout, report);
  return kOk;
}

int run_rates(const SparsityClass& cls, Index n, const PenaltyConfig& pen) {
  const RateReport rep = rate_report(cls, n, pen);
  std::cout << std::setprecision(10);
  std::cout << "h_lambda  " << rep.h_lambda << '\n'
            << "x_q       " << rep.x_q << '\n'
            << "k_q_star  " << rep.k_q_star << '\n'
            << "psi       " << rep.psi << '\n'
            << "psi0      " << rep.psi0 << '\n'
            << "k_prime   " << rep.k_prime << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse principal subspace estimation: simulation, estimators and benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spca 1.0");
  std::string isa = "auto";
  app.add_option("--kernels", isa, "Kernel ISA: auto, scalar, avx2, neon")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a spiked-model truth and data set");
  simulate->add_option("--n", sim.n, "Sample size")->check(CLI::PositiveNumber);
  simulate->add_option("--p", sim.p, "Ambient dimension")->check(CLI::PositiveNumber);
  simulate->add_option("--r", sim.r, "Rank")->check(CLI::PositiveNumber);
  simulate->add_option("--s", sim.s, "Row sparsity")->check(CLI::PositiveNumber);
  simulate->add_option("--lambda-top", sim.lambda_top, "Largest spike");
  simulate->add_option("--lambda-bottom", sim.lambda_bottom, "Smallest spike");
  simulate->add_option("--sigma", sim.sigma, "Noise standard deviation");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--profile", sim.profile, "Row variance profile")
      ->check(CLI::IsMember({"i4", "flat"}));
  simulate->add_option("--out", sim.out, "Output directory")->required();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Run one estimator on a data matrix");
  estimate->add_option("--method", est.method, "Estimator")
      ->check(CLI::IsMember({"regspca", "regular_pca", "aggregate"}));
  estimate->add_option("--r", est.r, "Rank (0 estimates it, regspca only)")
      ->check(CLI::NonNegativeNumber);
  estimate->add_option("--in", est.in, "Data matrix file")->required();
  estimate->add_option("--out", est.out, "Output directory")->required();
  estimate->add_option("--alpha", est.alpha, "Diagonal thresholding constant");
  estimate->add_option("--beta", est.beta, "Penalty constant beta > 2");
  estimate->add_option("--delta", est.delta, "Penalty constant delta in (0, 1)");
  estimate->add_option("--sigma", est.sigma, "Noise standard deviation");
  estimate->add_option("--k", est.k, "Support size for aggregate");
  estimate->add_option("--seed", est.seed, "Seed for the auxiliary noise or shuffled split");
  estimate->add_option("--variant", est.variant, "regspca variant")
      ->check(CLI::IsMember({"single", "symmetrized"}));
  estimate->add_option("--max-supports", est.max_supports, "Aggregation guard");
  estimate->add_flag("--shuffle", est.shuffle, "Shuffle rows before the aggregation split");
  estimate->add_option("--truth", est.truth, "Optional truth frame file; prints the loss");

  std::string spec_path;
  std::string bench_out;
  std::optional<unsigned> threads;
  auto* benchmark = app.add_subcommand("benchmark", "Run a replicated simulation grid");
  benchmark->add_option("--spec", spec_path, "key=value experiment config")->required();
  benchmark->add_option("--out", bench_out, "Output directory")->required();
  benchmark->add_option("--threads", threads, "Worker threads (overrides the config)");

  SparsityClass cls{.q = 0.0, .s = 40.0, .p = 2000, .r = 5, .lambda = 10.0, .kappa = 1.0};
  Index rates_n = 1000;
  PenaltyConfig rates_pen;
  auto* rates = app.add_subcommand("rates", "Print effective dimension and rate diagnostics");
  rates->add_option("--q", cls.q, "Weak l_q exponent in [0, 2)");
  rates->add_option("--s", cls.s, "Weak l_q radius");
  rates->add_option("--r", cls.r, "Rank");
  rates->add_option("--p", cls.p, "Ambient dimension");
  rates->add_option("--lambda", cls.lambda, "Spike lower bound (unit noise)");
  rates->add_option("--n", rates_n, "Sample size");
  rates->add_option("--kappa", cls.kappa, "Spike condition ratio");
  rates->add_option("--beta", rates_pen.beta, "Penalty constant for k'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  try {
    if (isa != "auto") {
      kernels::force_isa(isa == "scalar" ? kernels::Isa::scalar
                         : isa == "avx2" ? kernels::Isa::avx2
                                         : kernels::Isa::neon);
    }
    if (*simulate) return run_simulate(sim);
    if (*estimate) return run_estimate(est);
    if (*benchmark) return run_benchmark(spec_path, bench_out, threads);
    if (*rates) return run_rates(cls, rates_n, rates_pen);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEstimationFailed;
  }
  return kOk;
}
