#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "gnbp/dist.hpp"
#include "support/oracles.hpp"

namespace gnbp {
namespace {

const std::vector<double> kDiscounts{-4.0, -1.0, 0.0, 0.5, 0.9};
const std::vector<double> kProbs{0.05, 0.2, 0.4, 0.6, 0.75};

double tnb_total(double a, double p) {
  const double mean = tnb_mean(a, p);
  double total = 0.0;
  for (long u = 1;; ++u) {
    const double f = std::exp(tnb_log_pmf(u, a, p));
    total += f;
    if (u > mean && f < 1e-16) break;
    if (u > 100000) break;
  }
  return total;
}

TEST(Tnb, SpotValues) {
  EXPECT_NEAR(tnb_log_pmf(1, 0.5, 0.75), std::log(0.75), 1e-14);
  EXPECT_NEAR(tnb_log_pmf(1, 0.0, 0.5), std::log(0.5 / std::numbers::ln2), 1e-14);
}

TEST(Tnb, MatchesProductForm) {
  for (double a : kDiscounts) {
    for (double p : kProbs) {
      const auto direct = oracle::tnb_pmf_direct(a, p, 60);
      for (int u = 1; u <= 60; ++u) {
        const double ref = static_cast<double>(direct[static_cast<std::size_t>(u)]);
        EXPECT_NEAR(std::exp(tnb_log_pmf(u, a, p)) / ref, 1.0, 1e-9) << a << " " << p << " " << u;
      }
    }
  }
}

TEST(Tnb, RatioRecurrence) {
  for (double a : kDiscounts) {
    for (long u = 1; u < 30; ++u) {
      const double lhs = tnb_log_pmf(u + 1, a, 0.6) - tnb_log_pmf(u, a, 0.6);
      EXPECT_NEAR(lhs, std::log(0.6 * (u - a) / (u + 1.0)), 1e-11);
    }
  }
}

TEST(Tnb, Normalized) {
  for (double a : kDiscounts) {
    for (double p : kProbs) EXPECT_NEAR(tnb_total(a, p), 1.0, 1e-10) << a << " " << p;
  }
}

TEST(Tnb, ContinuousThroughZeroDiscount) {
  for (long u : {1L, 2L, 7L, 40L}) {
    const double at0 = tnb_log_pmf(u, 0.0, 0.5);
    EXPECT_NEAR(tnb_log_pmf(u, 1e-8, 0.5), at0, 1e-6);
    EXPECT_NEAR(tnb_log_pmf(u, -1e-8, 0.5), at0, 1e-6);
  }
  EXPECT_NEAR(tnb_mean(1e-8, 0.5) / tnb_mean(0.0, 0.5), 1.0, 1e-5);
  EXPECT_NEAR(tnb_mean(-1e-8, 0.5) / tnb_mean(0.0, 0.5), 1.0, 1e-5);
}

TEST(Tnb, ProbabilityGeneratingFunction) {
  // E[s^u] = (1 - (1 - p s)^a) / (1 - (1 - p)^a)
  for (double a : {-1.0, 0.5}) {
    const double p = 0.4;
    for (double s : {0.3, 0.8}) {
      double pgf = 0.0;
      for (long u = 1; u < 400; ++u) pgf += std::exp(tnb_log_pmf(u, a, p) + u * std::log(s));
      const double ref = (1 - std::pow(1 - p * s, a)) / (1 - std::pow(1 - p, a));
      EXPECT_NEAR(pgf, ref, 1e-12);
    }
  }
}

TEST(Tnb, SamplerMeans) {
  Rng rng(11);
  constexpr int kDraws = 1000000;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) sum += static_cast<double>(tnb_sample(0.5, 0.75, rng));
  EXPECT_NEAR(sum / kDraws, 1.5, 0.01);
  EXPECT_NEAR(tnb_mean(0.5, 0.75), 1.5, 1e-12);

  sum = 0.0;
  for (int i = 0; i < kDraws; ++i) sum += static_cast<double>(tnb_sample(0.0, 0.5, rng));
  const double log_mean = -0.5 / (0.5 * std::log(0.5));
  EXPECT_NEAR(sum / kDraws, log_mean, 0.01);
  EXPECT_NEAR(tnb_mean(0.0, 0.5), log_mean, 1e-12);
}

TEST(Tnb, SamplerMatchesPmf) {
  Rng rng(5);
  constexpr int kDraws = 200000;
  std::map<int, long> counts;
  for (int i = 0; i < kDraws; ++i) {
    const long u = tnb_sample(-1.0, 0.6, rng);
    ++counts[static_cast<int>(std::min(u, 40L))];
  }
  std::map<int, double> pmf;
  double head = 0.0;
  for (int u = 1; u < 40; ++u) head += pmf[u] = std::exp(tnb_log_pmf(u, -1.0, 0.6));
  pmf[40] = 1.0 - head;
  EXPECT_LT(oracle::tv_distance(oracle::normalized_counts(counts), pmf), 0.005);
}

TEST(NegativeBinomial, KnownValues) {
  EXPECT_NEAR(nb_log_pmf(0, 1.0, 0.5), std::log(0.5), 1e-15);
  EXPECT_NEAR(nb_log_pmf(2, 3.0, 0.25), std::log(6.0 * 0.0625 * std::pow(0.75, 3)), 1e-13);
}

TEST(Gnb, ZeroCount) {
  const ModelParams params{1.0, 0.5, 0.75, Parameterization::Original};
  const auto tri = StirlingTriangle::build(5, 0.5);
  EXPECT_NEAR(gnb_log_pmf(0, params, tri), -(1 - std::sqrt(0.25)) / (0.5 * std::sqrt(0.75)),
              1e-12);
  EXPECT_NEAR(gnb_log_pmf(0, params, tri), -1.15470, 1e-5);
}

TEST(Gnb, NegativeBinomialLimit) {
  for (double p : {0.2, 0.7}) {
    const ModelParams params{2.5, 1e-9, p, Parameterization::Original};
    const auto tri = StirlingTriangle::build(60, 1e-9);
    for (long m = 0; m <= 60; m += 3) {
      EXPECT_NEAR(gnb_log_pmf(m, params, tri), nb_log_pmf(m, 2.5, p), 1e-6);
    }
  }
}

TEST(Gnb, MatchesCompoundPoisson) {
  for (double a : kDiscounts) {
    for (double p : {0.2, 0.6}) {
      const ModelParams params{1.7, a, p, Parameterization::Original};
      const auto tri = StirlingTriangle::build(30, a);
      const auto ref = oracle::compound_poisson_pmf(params, 30);
      for (int m = 0; m <= 30; ++m) {
        const double r = static_cast<double>(ref[static_cast<std::size_t>(m)]);
        EXPECT_NEAR(std::exp(gnb_log_pmf(m, params, tri)) / r, 1.0, 1e-9)
            << "a=" << a << " p=" << p << " m=" << m;
      }
    }
  }
}

TEST(Gnb, Normalized) {
  const auto tri_cache = [](double a) { return StirlingTriangle::build(1500, a); };
  for (double a : kDiscounts) {
    const auto tri = tri_cache(a);
    for (double p : kProbs) {
      const ModelParams params{1.0, a, p, Parameterization::Original};
      const double mean = gnb_moments(params).mean;
      double total = 0.0;
      int m = 0;
      for (; m <= tri.m_max(); ++m) {
        const double f = std::exp(gnb_log_pmf(m, params, tri));
        total += f;
        if (m > mean && f < 1e-14) break;
      }
      ASSERT_LE(m, tri.m_max()) << "tail not reached at a=" << a << " p=" << p;
      EXPECT_NEAR(total, 1.0, 1e-10) << a << " " << p;
    }
  }
}

TEST(Gnb, ParameterizationScaleIdentity) {
  for (double a : {-2.0, 0.5}) {
    const double p = 0.35;
    const ModelParams rep{1.3, a, p, Parameterization::Reparameterized};
    const ModelParams orig{1.3 * std::pow(p / (1 - p), a), a, p, Parameterization::Original};
    const auto tri = StirlingTriangle::build(25, a);
    for (long m = 0; m <= 25; ++m) {
      EXPECT_NEAR(gnb_log_pmf(m, rep, tri), gnb_log_pmf(m, orig, tri), 1e-10);
    }
  }
}

TEST(Gnb, Moments) {
  const auto m1 = gnb_moments({1.0, 0.0, 0.5, Parameterization::Original});
  EXPECT_NEAR(m1.mean, 1.0, 1e-12);
  EXPECT_NEAR(m1.variance, 2.0, 1e-12);
  const auto m2 = gnb_moments({2.0, 0.5, 0.5, Parameterization::Original});
  EXPECT_NEAR(m2.mean, 2.0, 1e-12);
  EXPECT_NEAR(m2.variance, 3.0, 1e-12);
}

TEST(Gnb, SamplerMatchesPmf) {
  const ModelParams params{1.0, 0.5, 0.5, Parameterization::Original};
  const auto tri = StirlingTriangle::build(50, 0.5);
  Rng rng(3);
  constexpr int kDraws = 1000000;
  std::map<int, long> counts;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const long m = gnb_sample(params, rng);
    sum += static_cast<double>(m);
    ++counts[static_cast<int>(std::min(m, 51L))];
  }
  EXPECT_NEAR(sum / kDraws, 1.0, 0.01);
  std::map<int, double> pmf;
  double head = 0.0;
  for (int m = 0; m <= 50; ++m) head += pmf[m] = std::exp(gnb_log_pmf(m, params, tri));
  pmf[51] = 1.0 - head;
  EXPECT_LT(oracle::tv_distance(oracle::normalized_counts(counts), pmf), 0.005);
}

TEST(Gnb, SamplerNegativeBinomialMoments) {
  const ModelParams params{2.0, 0.0, 0.4, Parameterization::Original};
  Rng rng(8);
  constexpr int kDraws = 400000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const auto m = static_cast<double>(gnb_sample(params, rng));
    s += m;
    s2 += m * m;
  }
  const double mean = s / kDraws;
  const double var = s2 / kDraws - mean * mean;
  // NB(2, 0.4): mean 2 * 0.4 / 0.6, variance mean / 0.6.
  EXPECT_NEAR(mean, 4.0 / 3.0, 0.015);
  EXPECT_NEAR(var, 4.0 / 1.8, 0.05);
}

TEST(Gnb, RejectsUncoveredTriangle) {
  const auto tri = StirlingTriangle::build(5, 0.5);
  EXPECT_THROW(gnb_log_pmf(6, {1.0, 0.5, 0.5, Parameterization::Original}, tri),
               std::invalid_argument);
  EXPECT_THROW(gnb_log_pmf(3, {1.0, 0.25, 0.5, Parameterization::Original}, tri),
               std::invalid_argument);
}

}  // namespace
}  // namespace gnbp
