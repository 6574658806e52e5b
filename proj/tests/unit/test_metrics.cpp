#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "favfa/error.hpp"
#include "favfa/metrics/diversity.hpp"
#include "favfa/metrics/fairness.hpp"
#include "favfa/metrics/threshold.hpp"
#include "favfa/random.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace favfa;
using data::GroundTruth;

namespace {

std::vector<GroundTruth> labels(std::initializer_list<int> same) {
  std::vector<GroundTruth> out;
  for (int s : same) out.push_back(s ? GroundTruth::kSame : GroundTruth::kDifferent);
  return out;
}

metrics::GroupStats with_accuracy(double a) {
  metrics::GroupStats g;
  g.accuracy = a;
  g.n_pos = g.n_neg = 1;
  return g;
}

metrics::GroupStats with_rates(double tmr, double fmr) {
  metrics::GroupStats g;
  g.n_pos = g.n_neg = 10;
  g.tmr = tmr;
  g.fmr = fmr;
  return g;
}

/// Pairs with one covariate map each; group g -> (gender, ethnicity) cell g.
struct Synthetic {
  std::vector<data::PairRecord> pairs;
  std::vector<data::PairCovariates> covs;
  std::vector<int> group;
};

Synthetic random_dataset(std::uint64_t seed, std::size_t max_pairs, int max_groups) {
  static const char* kGender[] = {"Male", "Female"};
  static const char* kEth[] = {"Caucasian", "African", "Asian", "Indian"};
  Rng rng(seed);
  const int groups = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_groups)));
  const std::size_t n = 2 + rng.below(max_pairs - 1);
  Synthetic s;
  for (std::size_t i = 0; i < n; ++i) {
    const int g = static_cast<int>(rng.below(static_cast<std::uint64_t>(groups)));
    // Coarse distances force ties.
    const double d = static_cast<double>(rng.below(50)) / 10.0;
    s.pairs.push_back(fixture::pair("p" + std::to_string(i), "a", "b", rng.bernoulli(0.5), d));
    data::PairCovariates c;
    c.pair_id = s.pairs.back().pair_id;
    c.categorical["gender"] = kGender[g / 4];
    c.categorical["ethnicity"] = kEth[g % 4];
    s.covs.push_back(c);
    s.group.push_back(g);
  }
  return s;
}

}  // namespace

TEST(Threshold, SeparableMidpoint) {
  const std::vector<double> d{0.2, 0.3, 0.7, 0.9};
  const auto r = metrics::optimize_threshold(d, labels({1, 1, 0, 0}));
  EXPECT_DOUBLE_EQ(r.threshold, 0.5);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
}

TEST(Threshold, InvertedMatchesSweep) {
  const std::vector<double> d{0.8, 0.2};
  const auto r = metrics::optimize_threshold(d, labels({1, 0}));
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.accuracy, oracle::best_accuracy(d, {true, false}));
}

TEST(Threshold, SingleClassIsDegenerate) {
  const std::vector<double> d{0.1, 0.2};
  try {
    metrics::optimize_threshold(d, labels({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegeneratePairs);
  }
}

TEST(Threshold, AccuracyMatchesBruteForceSweep) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> d;
    std::vector<bool> same;
    std::vector<GroundTruth> truth;
    for (std::size_t i = 0; i < n; ++i) {
      d.push_back(static_cast<double>(rng.below(20)));
      same.push_back(i == 0 ? true : (i == 1 ? false : rng.bernoulli(0.5)));
      truth.push_back(same.back() ? GroundTruth::kSame : GroundTruth::kDifferent);
    }
    const auto r = metrics::optimize_threshold(d, truth);
    ASSERT_DOUBLE_EQ(r.accuracy, oracle::best_accuracy(d, same)) << "seed " << seed;
    // The reported threshold reproduces the reported counts.
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] < r.threshold) (same[i] ? tp : fp) += 1;
    }
    ASSERT_EQ(tp, r.true_positives);
    ASSERT_EQ(fp, r.false_positives);
  }
}

TEST(Threshold, MonotoneTransformKeepsCounts) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    std::vector<double> d, t;
    std::vector<GroundTruth> truth;
    for (int i = 0; i < 80; ++i) {
      d.push_back(rng.uniform() * 2.0);
      t.push_back(std::exp(3.0 * d.back()) + 7.0);
      truth.push_back(i % 2 ? GroundTruth::kSame : GroundTruth::kDifferent);
    }
    const auto a = metrics::optimize_threshold(d, truth);
    const auto b = metrics::optimize_threshold(t, truth);
    ASSERT_EQ(a.accuracy, b.accuracy);
    ASSERT_EQ(a.true_positives, b.true_positives);
    ASSERT_EQ(a.false_positives, b.false_positives);
  }
}

TEST(Fairness, FourPairsThreeCorrect) {
  std::vector<data::PairRecord> pairs{fixture::pair("1", "a", "b", true, 0.1), fixture::pair("2", "a", "b", true, 0.9),
                                      fixture::pair("3", "a", "b", false, 0.8), fixture::pair("4", "a", "b", false, 0.7)};
  std::vector<data::PairCovariates> covs(4);
  for (auto& c : covs) c.categorical["gender"] = "Male";
  const std::vector<std::string> grouping{"gender"};
  const auto conf = metrics::group_confusion(pairs, covs, 0.5, grouping, 1);
  ASSERT_EQ(conf.groups.size(), 1u);
  EXPECT_DOUBLE_EQ(conf.groups[0].accuracy, 0.75);
}

TEST(Fairness, LowSupportGroupIsExcluded) {
  std::vector<data::PairRecord> pairs{fixture::pair("1", "a", "b", true, 0.1), fixture::pair("2", "a", "b", false, 0.9)};
  std::vector<data::PairCovariates> covs(2);
  for (auto& c : covs) c.categorical["gender"] = "Female";
  const std::vector<std::string> grouping{"gender"};
  const auto conf = metrics::group_confusion(pairs, covs, 0.5, grouping, 5);
  EXPECT_TRUE(conf.groups.empty());
  ASSERT_EQ(conf.excluded.size(), 1u);
  EXPECT_THROW(metrics::fairness_report(conf, 0.5), Error);
}

TEST(Fairness, DegreeOfBias) {
  const std::vector<metrics::GroupStats> g{with_accuracy(0.9), with_accuracy(0.8), with_accuracy(0.7)};
  EXPECT_NEAR(metrics::degree_of_bias(g), 0.081650, 1e-6);
  EXPECT_EQ(metrics::degree_of_bias(std::vector{with_accuracy(0.9)}), 0.0);
  EXPECT_EQ(metrics::degree_of_bias(std::vector{with_accuracy(0.6), with_accuracy(0.6)}), 0.0);
}

TEST(Fairness, DemographicParity) {
  std::vector<metrics::GroupStats> g(3);
  g[0].selection_rate = 0.6;
  g[1].selection_rate = 0.4;
  g[2].selection_rate = 0.5;
  EXPECT_NEAR(metrics::demographic_parity(g).difference, 0.2, 1e-15);
  g.pop_back();
  EXPECT_NEAR(metrics::demographic_parity(g).ratio, 0.666667, 1e-6);
  g[1].selection_rate = 0.6;
  EXPECT_EQ(metrics::demographic_parity(g).difference, 0.0);
  EXPECT_EQ(metrics::demographic_parity(g).ratio, 1.0);
}

TEST(Fairness, EqualizedOdds) {
  const std::vector<metrics::GroupStats> g{with_rates(0.9, 0.1), with_rates(0.8, 0.3)};
  EXPECT_NEAR(metrics::equalized_odds(g).difference, 0.2, 1e-15);
  EXPECT_NEAR(metrics::equalized_odds(g).ratio, 0.333333, 1e-6);
  const std::vector<metrics::GroupStats> same{with_rates(0.9, 0.1), with_rates(0.9, 0.1)};
  EXPECT_EQ(metrics::equalized_odds(same).difference, 0.0);
  EXPECT_EQ(metrics::equalized_odds(same).ratio, 1.0);
}

TEST(Fairness, ZeroFmrEverywhereGivesRatioOne) {
  const std::vector<metrics::GroupStats> g{with_rates(0.9, 0.0), with_rates(0.9, 0.0)};
  EXPECT_EQ(metrics::equalized_odds(g).ratio, 1.0);
}

TEST(Fairness, MicroAverageIgnoresGroupSize) {
  auto a = with_accuracy(1.0);
  a.n_pos = 500;
  a.n_neg = 500;
  auto b = with_accuracy(0.5);
  b.n_pos = 5;
  b.n_neg = 5;
  EXPECT_DOUBLE_EQ(metrics::micro_average_accuracy(std::vector{a, b}), 0.75);
  EXPECT_DOUBLE_EQ(metrics::micro_average_accuracy(std::vector{with_accuracy(0.9)}), 0.9);
}

TEST(Fairness, MatchesOracleOnRandomData) {
  const std::vector<std::string> grouping{"gender", "ethnicity"};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Synthetic s = random_dataset(seed, 300, 8);
    const double tau = 2.45;
    std::vector<oracle::Observation> obs;
    for (std::size_t i = 0; i < s.pairs.size(); ++i) {
      obs.push_back({s.group[i], s.pairs[i].positive(), s.pairs[i].distance < tau});
    }
    const auto tally = oracle::tally(obs);
    const std::size_t min_support = seed % 3 == 0 ? 0 : 10;
    const auto conf = metrics::group_confusion(s.pairs, s.covs, tau, grouping, min_support);
    std::size_t included = 0;
    for (const auto& [g, t] : tally) included += t.size() >= static_cast<long>(min_support);
    ASSERT_EQ(conf.groups.size(), included);
    if (included == 0) continue;
    const auto m = oracle::metrics(tally, static_cast<long>(min_support));
    const auto r = metrics::fairness_report(conf, tau);
    EXPECT_EQ(r.dpd, m.dpd);
    EXPECT_EQ(r.dpr, m.dpr);
    EXPECT_EQ(r.eod, m.eod);
    EXPECT_EQ(r.eor, m.eor);
    EXPECT_NEAR(r.dob, m.dob, 1e-12);
    EXPECT_NEAR(r.micro_accuracy, m.micro, 1e-12);
  }
}

TEST(Fairness, GroupCountsSumToGlobal) {
  const std::vector<std::string> grouping{"gender", "ethnicity"};
  const Synthetic s = random_dataset(99, 500, 8);
  const auto conf = metrics::group_confusion(s.pairs, s.covs, 2.0, grouping, 0);
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& g : conf.groups) {
    tp += g.tp;
    fp += g.fp;
    tn += g.tn;
    fn += g.fn;
  }
  std::size_t etp = 0, efp = 0, etn = 0, efn = 0;
  for (const auto& p : s.pairs) {
    const bool acc = p.distance < 2.0;
    if (p.positive()) (acc ? etp : efn) += 1; else (acc ? efp : etn) += 1;
  }
  EXPECT_EQ(tp, etp);
  EXPECT_EQ(fp, efp);
  EXPECT_EQ(tn, etn);
  EXPECT_EQ(fn, efn);
}

TEST(Fairness, MetricsStayInUnitInterval) {
  const std::vector<std::string> grouping{"gender", "ethnicity"};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Synthetic s = random_dataset(seed + 1000, 200, 8);
    const auto r = metrics::fairness_report(metrics::group_confusion(s.pairs, s.covs, 2.5, grouping, 0), 2.5);
    for (double v : {r.dpd, r.dpr, r.eod, r.eor}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Fairness, ProvidedPredictionsUsedVerbatim) {
  std::vector<data::PairRecord> pairs{fixture::pair("1", "a", "b", true, 0.9), fixture::pair("2", "a", "b", false, 0.1)};
  pairs[0].predicted = GroundTruth::kSame;
  pairs[1].predicted = GroundTruth::kDifferent;
  std::vector<data::PairCovariates> covs(2);
  for (auto& c : covs) c.categorical["gender"] = "Male";
  const std::vector<std::string> grouping{"gender"};
  const auto conf = metrics::group_confusion(pairs, covs, 0.5, grouping, 0);
  EXPECT_DOUBLE_EQ(conf.groups[0].accuracy, 1.0);
}

TEST(Diversity, KnownValues) {
  EXPECT_EQ(metrics::diversity(std::vector{0.5, 0.5}, 2), 1.0);
  EXPECT_EQ(metrics::diversity(std::vector{1.0, 0.0}, 2), 0.0);
  // -(0.7 ln 0.7 + 0.3 ln 0.1) / ln 4, evaluated to 30 digits offline.
  EXPECT_NEAR(metrics::diversity(std::vector{0.7, 0.1, 0.1, 0.1}, 4), 0.678389824723519736, 1e-15);
  EXPECT_NEAR(metrics::diversity(std::vector{0.7, 0.1, 0.1, 0.1}, 4),
              static_cast<double>(oracle::normalized_entropy({0.7L, 0.1L, 0.1L, 0.1L})), 1e-15);
}

TEST(Diversity, SingleCategoryIsDegenerate) {
  EXPECT_THROW(metrics::diversity(std::vector{1.0}, 1), Error);
}

TEST(Diversity, PermutationInvariantAndBounded) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + gen() % 7;
    std::vector<double> f(k);
    for (auto& v : f) v = static_cast<double>(gen() % 20);
    f[0] += 1.0;
    const double base = metrics::diversity(f, k);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0);
    std::shuffle(f.begin(), f.end(), gen);
    EXPECT_EQ(metrics::diversity(f, k), base);
  }
}

TEST(Diversity, UniformCountsAreExactlyOne) {
  for (std::size_t k = 2; k <= 12; ++k) {
    EXPECT_EQ(metrics::diversity(std::vector<double>(k, 3.0), k), 1.0) << k;
  }
}

TEST(Diversity, ObservedLabels) {
  const std::vector<std::string> cats{"A", "B", "C", "D"};
  std::vector<std::string> obs(7, "A");
  obs.insert(obs.end(), {"B", "C", "D"});
  EXPECT_NEAR(metrics::diversity_of(obs, cats), 0.678389824723519736, 1e-15);
}
