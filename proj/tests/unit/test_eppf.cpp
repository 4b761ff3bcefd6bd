#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "gnbp/dist.hpp"
#include "gnbp/eppf.hpp"
#include "gnbp/partition.hpp"
#include "support/oracles.hpp"

namespace gnbp {
namespace {

constexpr auto kOrig = Parameterization::Original;
constexpr auto kRep = Parameterization::Reparameterized;

Partition blocks(std::vector<int> labels) { return Partition::from_labels(labels); }

TEST(Partition, CanonicalLabels) {
  const auto p = blocks({5, 5, 2, 7, 2});
  EXPECT_EQ(p.assignments(), (std::vector<int>{0, 0, 1, 2, 1}));
  EXPECT_EQ(p.sizes(), (std::vector<int>{2, 2, 1}));
  EXPECT_EQ(p, blocks({1, 1, 0, 3, 0}));
  EXPECT_EQ(p.restricted(3), blocks({0, 0, 1}));
}

TEST(Partition, SubsampleCounts) {
  const auto p = blocks({0, 1, 0, 2, 1, 3});
  EXPECT_EQ(subsample_cluster_counts(p, 6), p.num_clusters());
  EXPECT_EQ(subsample_cluster_counts(p, 1), 1);
  EXPECT_EQ(subsample_cluster_counts(p, 3), 2);
  EXPECT_EQ(subsample_cluster_counts(p, 4), 3);
}

TEST(Partition, EnumerationMatchesBellNumbers) {
  EXPECT_EQ(bell_number(3), 5u);
  EXPECT_EQ(bell_number(8), 4140u);
  EXPECT_EQ(bell_number(12), 4213597u);
  for (int m = 1; m <= 8; ++m) {
    std::set<std::vector<int>> seen;
    for (const auto& part : enumerate_partitions(m)) {
      ASSERT_EQ(part, Partition::from_labels(part.assignments()));
      seen.insert(part.assignments());
    }
    EXPECT_EQ(seen.size(), bell_number(m)) << "m=" << m;
  }
  EXPECT_THROW(SetPartitions(13), std::invalid_argument);
}

TEST(Ecpf, FactorizesIntoSampleSizeAndEppf) {
  for (double a : {-2.0, 0.0, 0.6}) {
    for (auto param : {kOrig, kRep}) {
      const ModelParams params{1.4, a, 0.45, param};
      const auto tri = StirlingTriangle::build(7, a);
      for (const auto& part : enumerate_partitions(7)) {
        const double lhs = log_ecpf(part, params);
        const double rhs = gnb_log_pmf(7, params, tri) + log_eppf(part, params, tri);
        ASSERT_NEAR(lhs, rhs, 1e-11);
      }
    }
  }
}

TEST(Ecpf, MarginalizesToSampleSizeLaw) {
  // Sum over every label vector in {0..m-1}^m; a partition with l blocks is
  // hit m! / (m - l)! times.
  const std::vector<ModelParams> settings{
      {1.0, 0.5, 0.25, kOrig}, {2.0, -1.0, 0.6, kOrig}, {0.7, 0.0, 0.3, kRep}};
  for (const auto& params : settings) {
    const auto ref = oracle::compound_poisson_pmf(params, 6);
    for (int m = 1; m <= 6; ++m) {
      std::vector<int> z(static_cast<std::size_t>(m), 0);
      long double total = 0.0L;
      while (true) {
        const auto part = Partition::from_labels(z);
        const int l = part.num_clusters();
        total += std::exp(static_cast<long double>(log_ecpf(part, params))) /
                 oracle::falling_factorial(m, l);
        int i = 0;
        while (i < m && ++z[static_cast<std::size_t>(i)] == m) z[static_cast<std::size_t>(i++)] = 0;
        if (i == m) break;
      }
      EXPECT_NEAR(static_cast<double>(total / ref[static_cast<std::size_t>(m)]), 1.0, 1e-9)
          << "m=" << m << " a=" << params.discount;
    }
  }
}

TEST(Ecpf, ParameterizationIdentity) {
  for (double a : {-3.0, 0.4}) {
    const double p = 0.6;
    const double h0 = 1.1;
    const ModelParams rep{h0, a, p, kRep};
    const ModelParams orig{h0 * std::pow(p / (1 - p), a), a, p, kOrig};
    for (const auto& part : enumerate_partitions(6)) {
      ASSERT_NEAR(log_ecpf(part, rep), log_ecpf(part, orig), 1e-11);
    }
  }
}

TEST(Eppf, TwoDistinctElements) {
  const ModelParams params{1.0, 0.5, 0.25, kOrig};
  const auto tri = StirlingTriangle::build(3, 0.5);
  EXPECT_NEAR(std::exp(log_eppf(blocks({0, 1}), params, tri)), 0.8, 1e-14);
  EXPECT_NEAR(std::exp(log_eppf(blocks({0, 0}), params, tri)), 0.2, 1e-14);
}

TEST(Eppf, NormalizedOverAllPartitions) {
  for (double a : {-1.0, 0.0, 0.5}) {
    for (auto param : {kOrig, kRep}) {
      const ModelParams params{1.3, a, 0.4, param};
      const auto tri = StirlingTriangle::build(8, a);
      double total = 0.0;
      for (const auto& part : enumerate_partitions(8)) total += std::exp(log_eppf(part, params, tri));
      EXPECT_NEAR(total, 1.0, 1e-10) << "a=" << a;
    }
  }
}

TEST(Eppf, EwensAtZeroDiscount) {
  const double theta = 2.3;
  const ModelParams params{theta, 0.0, 0.8, kOrig};
  const auto tri = StirlingTriangle::build(6, 0.0);
  for (const auto& part : enumerate_partitions(6)) {
    ASSERT_NEAR(log_eppf(part, params, tri), oracle::ewens_log_eppf(part.sizes(), theta), 1e-12);
  }
}

TEST(Eppf, Exchangeable) {
  const ModelParams params{1.0, 0.3, 0.5, kOrig};
  const auto tri = StirlingTriangle::build(9, 0.3);
  std::mt19937 gen(4);
  const std::vector<int> labels{0, 1, 1, 2, 0, 0, 3, 1, 0};
  const double ref = log_eppf(blocks(labels), params, tri);
  for (int trial = 0; trial < 20; ++trial) {
    auto shuffled = labels;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    EXPECT_NEAR(log_eppf(blocks(shuffled), params, tri), ref, 1e-13);
  }
}

TEST(Eppf, RejectsUncoveredTriangle) {
  const auto tri = StirlingTriangle::build(3, 0.5);
  EXPECT_THROW(log_eppf(blocks({0, 1, 0, 2}), {1.0, 0.5, 0.5, kOrig}, tri),
               std::invalid_argument);
}

TEST(PredictionWeights, Values) {
  const ModelParams params{1.0, 0.5, 0.25, kOrig};
  const std::vector<int> sizes{3, 1};
  const auto w = prediction_weights(sizes, params);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_NEAR(w[0], 2.5, 1e-14);
  EXPECT_NEAR(w[1], 0.5, 1e-14);
  EXPECT_NEAR(w[2], 2.0, 1e-14);

  const auto first = prediction_weights(std::vector<int>{}, params);
  ASSERT_EQ(first.size(), 1u);
  EXPECT_NEAR(first[0], 2.0, 1e-14);

  const auto crp = prediction_weights(std::vector<int>{4, 2}, {1.7, 0.0, 0.9, kOrig});
  EXPECT_EQ(crp, (std::vector<double>{4.0, 2.0, 1.7}));

  const auto rep = prediction_weights(std::vector<int>{1}, {1.0, 0.5, 0.75, kRep});
  EXPECT_NEAR(rep[1], 2.0, 1e-14);  // h0 (1-p)^-a = 0.25^-0.5
}

TEST(PredictionWeights, RatioOfClusterProbabilities) {
  for (double a : {-1.5, 0.5}) {
    const ModelParams params{0.9, a, 0.35, kOrig};
    const std::vector<int> sizes{3, 1, 2};
    const auto w = prediction_weights(sizes, params);
    const double base = log_ecpf(sizes, params);
    std::vector<double> ratio;
    for (std::size_t k = 0; k <= sizes.size(); ++k) {
      auto next = sizes;
      if (k == sizes.size()) {
        next.push_back(1);
      } else {
        ++next[k];
      }
      ratio.push_back(std::exp(log_ecpf(next, params) - base));
    }
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(ratio[k] / ratio[0], w[k] / w[0], 1e-12);
  }
}

TEST(AdditionRule, HoldsAtZeroDiscount) {
  for (double gamma0 : {0.5, 3.0}) {
    const ModelParams params{gamma0, 0.0, 0.3, kOrig};
    const auto tri = StirlingTriangle::build(7, 0.0);
    for (int m = 1; m <= 6; ++m) {
      for (const auto& part : enumerate_partitions(m)) {
        ASSERT_LT(std::fabs(addition_rule_residual(part, params, tri)), 1e-12);
      }
    }
  }
}

TEST(AdditionRule, FailsForNonzeroDiscount) {
  const ModelParams params{1.0, 0.5, 0.25, kOrig};
  const auto tri = StirlingTriangle::build(3, 0.5);
  const double residual = addition_rule_residual(blocks({0, 1}), params, tri);
  // f(z1,z2|2) - f(z1,z2|3) with w* = 2 and a = 1/2.
  const double f2 = 2.0 / (0.5 + 2.0);
  const double f3 = f2 * (0.5 + 2.0) * (2.0 + 2.0 - 2 * 0.5) / (0.5 * 1.5 + 1.5 * 2.0 + 4.0);
  EXPECT_GT(std::fabs(residual), 1e-3);
  EXPECT_NEAR(residual, f2 - f3, 1e-13);
}

TEST(AdditionRule, SingletonIsOne) {
  const ModelParams params{1.0, 0.7, 0.25, kOrig};
  const auto tri = StirlingTriangle::build(2, 0.7);
  EXPECT_NEAR(log_eppf(blocks({0}), params, tri), 0.0, 1e-15);
}

TEST(SizeDependentEppf, FullSampleEqualsEppf) {
  const ModelParams params{1.0, 0.5, 0.25, kOrig};
  const auto tri = StirlingTriangle::build(6, 0.5);
  for (const auto& part : enumerate_partitions(5)) {
    ASSERT_NEAR(log_size_dependent_eppf(part, 5, params, tri), log_eppf(part, params, tri), 1e-13);
  }
}

TEST(SizeDependentEppf, TwoOfThreeClosedForm) {
  const double a = 0.5;
  const double w = 2.0;  // gamma0 p^-a at gamma0 = 1, p = 0.25
  const ModelParams params{1.0, a, 0.25, kOrig};
  const auto tri = StirlingTriangle::build(3, a);
  const double denom = (1 - a) * (2 - a) + (3 - 3 * a) * w + w * w;
  for (const auto& sub : enumerate_partitions(2)) {
    const int l = sub.num_clusters();
    const double f2 = std::exp(log_eppf(sub, params, tri));
    const double closed = f2 * (1 - a + w) * (w + 2 - l * a) / denom;
    EXPECT_NEAR(std::exp(log_size_dependent_eppf(sub, 3, params, tri)), closed, 1e-12);
    EXPECT_NEAR(std::exp(log_size_dependent_eppf_next(sub, params, tri)), closed, 1e-12);
  }
}

TEST(SizeDependentEppf, OneStepRecursionMatchesEnumeration) {
  for (double a : {-1.0, 0.5, 0.9}) {
    const ModelParams params{1.2, a, 0.4, kOrig};
    const auto tri = StirlingTriangle::build(8, a);
    for (int m = 2; m <= 8; ++m) {
      for (const auto& sub : enumerate_partitions(m - 1)) {
        const double enumerated = std::exp(log_size_dependent_eppf(sub, m, params, tri));
        const double recursion = std::exp(log_size_dependent_eppf_next(sub, params, tri));
        ASSERT_NEAR(enumerated, recursion, 1e-12) << "a=" << a << " m=" << m;
      }
    }
  }
}

TEST(SizeDependentEppf, SampleSizeFreeAtZeroDiscount) {
  const ModelParams params{1.5, 0.0, 0.6, kOrig};
  const auto tri = StirlingTriangle::build(8, 0.0);
  for (int m = 1; m <= 8; ++m) {
    for (int j = 1; j <= m; ++j) {
      for (const auto& sub : enumerate_partitions(j)) {
        ASSERT_NEAR(std::exp(log_size_dependent_eppf(sub, m, params, tri)),
                    std::exp(log_eppf(sub, params, tri)), 1e-12);
      }
    }
  }
}

TEST(SizeDependentEppf, DependsOnSampleSizeOtherwise) {
  const ModelParams params{1.0, 0.5, 0.25, kOrig};
  const auto tri = StirlingTriangle::build(8, 0.5);
  const auto sub = blocks({0, 1});
  EXPECT_GT(std::fabs(log_size_dependent_eppf(sub, 8, params, tri) - log_eppf(sub, params, tri)),
            1e-3);
  EXPECT_THROW(log_size_dependent_eppf(sub, 13, params, StirlingTriangle::build(13, 0.5)),
               std::invalid_argument);
}

}  // namespace
}  // namespace gnbp
