#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "spgarch/error.hpp"
#include "spgarch/simstudy.hpp"

using namespace spgarch;

namespace {

StudyConfig tiny_study() {
  StudyConfig c;
  c.n_sim = 3;
  c.length = 300;
  c.dgps = {2, 4};
  c.models = {"garch", "oracle"};
  c.sampler.n_iter = 3000;
  c.sampler.n_burn = 500;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Loss, Definition) {
  const std::vector<double> est{1.0, 2.0, 4.0}, truth{1.5, 2.0, 1.0};
  EXPECT_NEAR(loss_in_sample(est, truth, 1.0), (0.5 + 0.0 + 3.0) / 3.0, 1e-15);
  EXPECT_NEAR(loss_in_sample(est, truth, 2.0), std::sqrt((0.25 + 9.0) / 3.0), 1e-15);
  EXPECT_EQ(loss_in_sample(est, est, 2.0), 0.0);
  EXPECT_NEAR(loss_out_of_sample(est, truth, 2.0), loss_in_sample(est, truth, 2.0), 1e-15);
}

TEST(Loss, NonnegativeAndHomogeneous) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a(50), b(50), ca(50), cb(50);
    for (std::size_t i = 0; i < 50; ++i) {
      a[i] = n01(gen);
      b[i] = n01(gen);
      ca[i] = 3.5 * a[i];
      cb[i] = 3.5 * b[i];
    }
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      const double l = loss_in_sample(a, b, p);
      EXPECT_GT(l, 0.0);
      EXPECT_NEAR(loss_in_sample(ca, cb, p), 3.5 * l, 1e-12 * l);
    }
  }
}

TEST(Loss, Preconditions) {
  const std::vector<double> a{1.0, 2.0}, b{1.0};
  EXPECT_THROW(loss_in_sample(a, b, 2.0), ContractViolation);
  EXPECT_THROW(loss_in_sample(a, a, 0.5), ContractViolation);
  EXPECT_THROW(loss_out_of_sample(a, b, 1.0), ContractViolation);
}

TEST(Dgp, PersistencesFromSplineMachinery) {
  const double expected[] = {0.977, 0.95, 0.97, 0.975};
  for (int id : {1, 2, 4}) {
    const auto spline = dgp_spline(id);
    ASSERT_TRUE(spline.has_value());
    const double pers = spline->pool.size() == 0
                            ? spline->b0 + spline->b2
                            : persistence(*spline, 8.0, build_c_table(spline->pool, {50, 2.02, 200.0}));
    EXPECT_NEAR(pers, expected[id - 1], 1e-3) << "DGP " << id;
    EXPECT_NEAR(dgp_spec(id).persistence, pers, 1e-6);
  }
  EXPECT_FALSE(dgp_spline(3).has_value());
  EXPECT_THROW(dgp_spec(0), ContractViolation);
  EXPECT_THROW(dgp_spec(5), ContractViolation);
}

TEST(Dgp, BetaTPersistenceByMonteCarlo) {
  const DgpSpec d = dgp_spec(3);
  const StdTDist dist(d.nu);
  RandomStream rng(12);
  const int n = 2000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = d.g(dist.sample(rng));
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  EXPECT_NEAR(mean, 0.97, std::max(4 * se, 2e-3));
  EXPECT_NEAR(d.persistence, 0.97, 1e-12);
}

TEST(Dgp, SplineMatchesClosureAndShape) {
  for (int id : {1, 2, 4}) {
    const DgpSpec d = dgp_spec(id);
    const auto s = dgp_spline(id);
    for (double e = -4.0; e <= 4.0; e += 0.37) EXPECT_NEAR(d.g(e), eval_g(*s, e), 1e-14);
    EXPECT_EQ(d.omega, 0.1);
    EXPECT_EQ(d.mu, 0.0);
  }
}

TEST(Dgp, SimulationIsDeterministicAndSized) {
  const DgpSpec d = dgp_spec(1);
  RandomStream a(5), b(5);
  const auto p = simulate_dgp(d, 500, a);
  const auto q = simulate_dgp(d, 500, b);
  ASSERT_EQ(p.returns.size(), 500u);
  ASSERT_EQ(p.sigma.size(), 500u);
  EXPECT_EQ(p.returns, q.returns);
  EXPECT_EQ(p.sigma, q.sigma);
  for (double s : p.sigma) EXPECT_GT(s, 0.0);
}

TEST(StudyConfig, Validation) {
  StudyConfig c;
  c.n_sim = 0;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = {};
  c.length = 2;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = {};
  c.models = {"arch"};
  EXPECT_THROW(c.validate(), std::exception);
  c = {};
  c.dgps = {7};
  EXPECT_THROW(c.validate(), ContractViolation);
  const StudyConfig full = StudyConfig::full_scale_preset();
  EXPECT_EQ(full.n_sim, 500u);
  EXPECT_EQ(full.length, 4001u);
  EXPECT_EQ(full.sampler.n_iter, 550000u);
}

TEST(Study, OracleHasZeroLossAndRunIsDeterministic) {
  StudyConfig c = tiny_study();
  c.threads = 2;
  const StudyReport a = run_study(c);
  c.threads = 1;
  const StudyReport b = run_study(c);
  EXPECT_EQ(a.dropped, 0u);
  for (int dgp : {2, 4}) {
    for (double p : {1.0, 2.0}) {
      const StudyCell& oracle = a.cell(dgp, "oracle", p);
      EXPECT_EQ(oracle.in_sample_mean, 0.0);
      EXPECT_EQ(oracle.out_of_sample, 0.0);
      EXPECT_EQ(oracle.replications, 3u);
      const StudyCell& g = a.cell(dgp, "garch", p);
      EXPECT_GT(g.in_sample_mean, 0.0);
      EXPECT_EQ(g.in_sample_mean, b.cell(dgp, "garch", p).in_sample_mean);
      EXPECT_EQ(g.out_of_sample, b.cell(dgp, "garch", p).out_of_sample);
    }
  }
  ASSERT_EQ(a.raw.size(), b.raw.size());
  EXPECT_EQ(a.raw.size(), 2u * 3u * 2u);

  const auto dir = std::filesystem::temp_directory_path() / "spgarch_study_test";
  std::filesystem::create_directories(dir);
  write_study_csv(a, dir / "a.csv");
  write_study_csv(b, dir / "b.csv");
  write_study_raw_csv(a, dir / "a_raw.csv");
  write_study_raw_csv(b, dir / "b_raw.csv");
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a_raw.csv"), slurp(dir / "b_raw.csv"));
  EXPECT_EQ(slurp(dir / "a.csv").rfind("dgp,model,p,in_sample,out_of_sample,replications", 0), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Study, ProgressReportsEveryReplication) {
  StudyConfig c = tiny_study();
  c.models = {"oracle"};
  std::size_t calls = 0;
  run_study(c, [&](int, std::size_t) { ++calls; });
  EXPECT_EQ(calls, 6u);
}
