#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "rggclust/cltlab.hpp"

namespace rggclust {
namespace {

using nlohmann::json;

json sparse_config() {
  return json::parse(R"({
    "density": {"kind": "von_mises", "kappa": 1, "mu": 0},
    "n": 5000, "r_rule": {"c": 1, "alpha": 1.3},
    "replications": 40, "master_seed": 11
  })");
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream os;
  write_records_csv(os, r.records);
  return os.str();
}

TEST(Config, ParsesAndRoundTrips) {
  const auto c = config_from_json(sparse_config());
  EXPECT_EQ(c.n, 5000u);
  EXPECT_DOUBLE_EQ(c.radius.resolve(c.n), std::pow(5000.0, -1.3));
  const auto again = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(again), config_to_json(c));
}

TEST(Config, RejectsUnknownKeysAtEveryLevel) {
  auto j = sparse_config();
  j["colour"] = 1;
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = sparse_config();
  j["r_rule"]["beta"] = 1;
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = sparse_config();
  j["density"]["sigma"] = 1;
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = sparse_config();
  j["checks"] = {{"ks", 0.1}};
  EXPECT_THROW(config_from_json(j), ConfigError);
}

TEST(Config, RejectsInvalidValues) {
  auto j = sparse_config();
  j["replications"] = 1;
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = sparse_config();
  j["r"] = 0.1;  // both r and r_rule
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = sparse_config();
  j.erase("r_rule");
  j["r"] = 0.7;
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = sparse_config();
  j["n"] = "many";
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = sparse_config();
  j["regime"] = "IV";
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = sparse_config();
  j["density"] = {{"kind", "von_mises"}, {"kappa", -1}, {"mu", 0}};
  EXPECT_THROW(config_from_json(j), ConfigError);
}

TEST(Experiment, ByteIdenticalAcrossThreadCounts) {
  const auto c = config_from_json(sparse_config());
  const auto a = run_experiment(c, 1);
  const auto b = run_experiment(c, 8);
  EXPECT_EQ(csv_of(a), csv_of(b));
  EXPECT_EQ(summary_to_json(a.summary, c).dump(), summary_to_json(b.summary, c).dump());
}

TEST(Experiment, SummaryRecomputedFromCsv) {
  const auto c = config_from_json(sparse_config());
  const auto res = run_experiment(c, 4);
  std::istringstream is(csv_of(res));
  const auto back = read_records_csv(is);
  ASSERT_EQ(back.size(), res.records.size());
  ExperimentSummary s;
  summarize_records(back, s);
  EXPECT_EQ(s.z.mean, res.summary.z.mean);
  EXPECT_EQ(s.z.variance, res.summary.z.variance);
  EXPECT_EQ(s.ks, res.summary.ks);
  EXPECT_EQ(s.effective, res.summary.effective);
  EXPECT_EQ(s.clustering_mean, res.summary.clustering_mean);
}

TEST(Experiment, RecordsSkipWhenNoTwoPaths) {
  std::vector<ReplicationRecord> recs(2);
  recs[0].index = 0;
  recs[1].index = 1;
  recs[1].counts = {5, 1, 0, 0};
  recs[1].clustering = 0.5;
  recs[1].z = -1.25;
  std::ostringstream os;
  write_records_csv(os, recs);
  EXPECT_EQ(os.str(), std::string(kRecordsHeader) +
                          "\n0,0,0,0,NA,NA,0,skip:no_two_paths\n1,1,0,0,0.5,-1.25,0,ok\n");
}

TEST(Experiment, UniformClusteringConvergesToThreeQuarters) {
  auto j = json::parse(R"({"density": {"kind": "uniform"}, "n": 5000, "r": 0.02,
                           "replications": 200, "master_seed": 5, "sigma2n_samples": 100000})");
  const auto c = config_from_json(j);
  const auto res = run_experiment(c, 8);
  EXPECT_EQ(res.summary.regime.regime, Regime::IntermediateII);
  EXPECT_EQ(res.summary.skipped, 0u);
  EXPECT_LT(std::abs(res.summary.clustering_mean - 0.75), 0.01);
  EXPECT_NEAR(res.summary.constants.mu_n_exact, 0.75, 1e-12);
}

TEST(Experiment, DenseRegimeLabel) {
  auto j = json::parse(R"({"density": {"kind": "von_mises", "kappa": 1, "mu": 0},
                           "n": 200000, "r": 0.2, "replications": 2})");
  const auto p = prepare_experiment(config_from_json(j));
  EXPECT_EQ(p.regime.regime, Regime::DenseI);
  EXPECT_GT(p.constants.sigma1_sq, 0.0);
  EXPECT_FALSE(p.constants.sigma2n_sq.has_value());
}

TEST(Experiment, RefusesDegenerateAndAmbiguous) {
  auto j = json::parse(R"({"density": {"kind": "uniform"}, "n": 100, "r": 0.001,
                           "replications": 10})");
  try {
    prepare_experiment(config_from_json(j));
    FAIL() << "expected refusal";
  } catch (const RegimeRefusal& e) {
    EXPECT_EQ(e.diagnostics.regime, Regime::Degenerate);
  }
  // Forcing a regime does not override degeneracy.
  j["regime"] = "III";
  EXPECT_THROW(prepare_experiment(config_from_json(j)), RegimeRefusal);

  auto amb = json::parse(R"({"density": {"kind": "von_mises", "kappa": 1, "mu": 0},
                             "n": 1000, "r": 0.001, "replications": 10})");
  EXPECT_THROW(prepare_experiment(config_from_json(amb)), RegimeRefusal);
  amb["regime"] = "SparseIII";
  EXPECT_EQ(prepare_experiment(config_from_json(amb)).regime.regime, Regime::SparseIII);
}

TEST(Experiment, UniformCannotBeForcedIntoCaseI) {
  auto j = json::parse(R"({"density": {"kind": "uniform"}, "n": 200000, "r": 0.2,
                           "regime": "DenseI", "replications": 2})");
  EXPECT_THROW(prepare_experiment(config_from_json(j)), ConfigError);
}

TEST(Stats, KsExamples) {
  // Exact normal quantiles at (i - 1/2)/m give KS = 1/(2m).
  std::vector<double> q;
  for (int i = 1; i <= 1000; ++i) {
    const double p = (i - 0.5) / 1000.0;
    double lo = -10, hi = 10;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    q.push_back(0.5 * (lo + hi));
  }
  EXPECT_NEAR(ks_statistic(q), 0.0005, 1e-9);
  const std::vector<double> constant(50, 0.0);
  EXPECT_GE(ks_statistic(constant), 0.5);
  std::vector<double> shifted = q;
  for (auto& v : shifted) v += 3.0;
  EXPECT_GT(ks_statistic(shifted), 0.8);
}

TEST(Stats, MomentsExample) {
  const std::vector<double> x{1, 2, 3, 4};
  const auto m = sample_moments(x);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.variance, 5.0 / 3.0);
  EXPECT_NEAR(m.skewness, 0.0, 1e-15);
}

TEST(Stats, SyntheticNormalFeedPassesChecks) {
  RngStream s(31, 0);
  std::vector<ReplicationRecord> recs(2000);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    // Box-Muller.
    const double u1 = 1.0 - s.uniform01(), u2 = s.uniform01();
    recs[i].z = std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
    recs[i].clustering = 0.75;
  }
  ExperimentSummary sum;
  summarize_records(recs, sum);
  EXPECT_LT(sum.ks, 0.04);
  EXPECT_LT(std::abs(sum.z.mean), 0.1);
  EXPECT_LT(std::abs(sum.z.variance - 1), 0.1);
  EXPECT_LT(std::abs(sum.z.excess_kurtosis), 0.3);
  EXPECT_TRUE(evaluate_checks(sum, {0.05, 0.1, 0.1}).empty());
  EXPECT_EQ(evaluate_checks(sum, {0.001, std::nullopt, std::nullopt}).size(), 1u);
}

TEST(Expansion, UniformEdgeIsExact) {
  const auto chk = expansion_scaling_check(CircularDensity::uniform(), ExpansionQuantity::EdgeGiven,
                                           {0.2, 0.1, 0.05});
  EXPECT_TRUE(chk.all_errors_zero());
  EXPECT_TRUE(std::isnan(chk.orders[0]));
}

TEST(Expansion, VonMisesOrders) {
  const std::vector<double> grid{0.2, 0.1, 0.05, 0.025};
  const auto f = CircularDensity::von_mises(1.0, 0.0);
  EXPECT_GE(expansion_scaling_check(f, ExpansionQuantity::Triangle, grid).min_order(), 3.5);
  EXPECT_GE(expansion_scaling_check(f, ExpansionQuantity::MuN, grid).min_order(), 2.5);
  EXPECT_THROW(expansion_scaling_check(f, ExpansionQuantity::MuN, {0.3}), std::invalid_argument);
}

TEST(Table1, AllCellsWithinHalfPercent) {
  const auto cells = table1_reproduce();
  ASSERT_EQ(cells.size(), 12u);
  for (const auto& c : cells) {
    EXPECT_TRUE(c.pass) << "kappa=" << c.kappa << " mu=" << c.mu << " got " << c.sigma1_sq;
  }
}

TEST(Table1, LocationInvariance) {
  for (double kappa : {0.1, 1.0, 5.0}) {
    const double base = constants(CircularDensity::von_mises(kappa, 0.0)).sigma1_sq;
    for (double mu : {0.1, 0.3, 0.5, 2.0}) {
      const double v = constants(CircularDensity::von_mises(kappa, mu)).sigma1_sq;
      EXPECT_LT(std::abs(v - base) / base, 1e-10) << kappa << " " << mu;
    }
  }
}

TEST(Oracle, SweepHasNoMismatches) {
  const auto res = oracle_equivalence_sweep(300, 8);
  EXPECT_EQ(res.instances, 300u);
  EXPECT_TRUE(res.mismatches.empty());
}

}  // namespace
}  // namespace rggclust
