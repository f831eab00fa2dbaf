#include <gtest/gtest.h>

#include <sstream>

#include "spca/error.hpp"
#include "spca/harness.hpp"

using namespace spca;

namespace {

ExperimentSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_spec(in);
}

ErrorKind parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorKind::io;
}

}  // namespace

TEST(Config, DefaultsWhenEmpty) {
  const ExperimentSpec spec = parse("# nothing\n\n");
  EXPECT_EQ(spec.n, 1000);
  EXPECT_EQ(spec.p, 2000);
  EXPECT_EQ(spec.r_values, (std::vector<Index>{1, 5, 10, 20}));
  EXPECT_EQ(spec.s_values, (std::vector<Index>{40, 80, 120, 160, 200}));
  EXPECT_EQ(spec.reps, 50);
}

TEST(Config, ParsesAllKeys) {
  const ExperimentSpec spec = parse(
      "n = 500\np=1000\nr_values = 1, 5,10\ns_values=20,40,60  # trailing comment\n"
      "lambda_top=30\nlambda_bottom=5\nq=0\nsigma=2\nestimators=regspca,regular_pca\n"
      "reps=20\nmaster_seed=7\nrow_variance_profile=flat\nalpha=2.5\nbeta=2.5\ndelta=0.1\n"
      "estimate_rank=true\nmax_supports=1000\nthreads=2\n");
  EXPECT_EQ(spec.n, 500);
  EXPECT_EQ(spec.p, 1000);
  EXPECT_EQ(spec.r_values, (std::vector<Index>{1, 5, 10}));
  EXPECT_EQ(spec.s_values, (std::vector<Index>{20, 40, 60}));
  EXPECT_EQ(spec.lambda_top, 30.0);
  EXPECT_EQ(spec.sigma, 2.0);
  EXPECT_EQ(spec.estimators.size(), 2u);
  EXPECT_EQ(spec.master_seed, 7u);
  EXPECT_EQ(spec.row_variance_profile, RowProfile::flat);
  EXPECT_TRUE(spec.estimate_rank);
  EXPECT_EQ(spec.threads, 2u);
  EXPECT_EQ(spec.delta, 0.1);
}

TEST(Config, Errors) {
  EXPECT_EQ(parse_error("n=10\nn=20\n"), ErrorKind::invalid_config);
  EXPECT_EQ(parse_error("bogus=1\n"), ErrorKind::invalid_config);
  EXPECT_EQ(parse_error("n\n"), ErrorKind::invalid_config);
  EXPECT_EQ(parse_error("n=ten\n"), ErrorKind::invalid_config);
  EXPECT_EQ(parse_error("n=\n"), ErrorKind::invalid_config);
  EXPECT_EQ(parse_error("estimators=itspca\n"), ErrorKind::invalid_config);
  EXPECT_EQ(parse_error("beta=1.5\n"), ErrorKind::invalid_config);
  EXPECT_EQ(parse_error("r_values=50\ns_values=40\n"), ErrorKind::invalid_config);
  EXPECT_EQ(parse_error("estimators=aggregate\n"), ErrorKind::combinatorial_guard);
}

TEST(Config, MissingFileIsIo) {
  try {
    load_experiment_spec("/nonexistent/spec.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}
