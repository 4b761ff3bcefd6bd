#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gnbp/special.hpp"

namespace gnbp {
namespace {

TEST(LogGammaRatio, SmallCases) {
  EXPECT_EQ(log_gamma_ratio(1, 0.5), 0.0);
  EXPECT_NEAR(log_gamma_ratio(2, 0.5), std::log(0.5), 1e-15);
  EXPECT_NEAR(log_gamma_ratio(4, 0.0), std::log(6.0), 1e-14);
}

TEST(LogGammaRatio, MatchesLgammaAcrossTheSwitch) {
  for (double a : {-4.0, -0.5, 0.0, 0.3, 0.9, 0.9999}) {
    for (long n : {1L, 5L, 31L, 32L, 33L, 100L, 5000L}) {
      const double ref = std::lgamma(n - a) - std::lgamma(1.0 - a);
      EXPECT_NEAR(log_gamma_ratio(n, a), ref, 1e-10 * std::max(1.0, std::fabs(ref)))
          << "n=" << n << " a=" << a;
    }
  }
}

TEST(LogGammaRatio, RejectsBadArguments) {
  EXPECT_THROW(log_gamma_ratio(0, 0.5), std::invalid_argument);
  EXPECT_THROW(log_gamma_ratio(3, 1.0), std::invalid_argument);
}

TEST(LogSumExp, StableAndEdgeCases) {
  const std::vector<double> big{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(big), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_EQ(log_sum_exp(std::vector<double>{}), -INFINITY);
  const std::vector<double> all_neg_inf{-INFINITY, -INFINITY};
  EXPECT_EQ(log_sum_exp(all_neg_inf), -INFINITY);
  EXPECT_NEAR(log_add_exp(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
}

TEST(LogAbsExpm1, NearZeroAndLarge) {
  EXPECT_NEAR(log_abs_expm1(1e-12), std::log(1e-12), 1e-9);
  EXPECT_NEAR(log_abs_expm1(-1e-12), std::log(1e-12), 1e-9);
  EXPECT_NEAR(log_abs_expm1(800.0), 800.0, 1e-12);
  EXPECT_NEAR(log_abs_expm1(-800.0), 0.0, 1e-12);
  EXPECT_NEAR(log_abs_expm1(1.0), std::log(std::expm1(1.0)), 1e-15);
}

TEST(StirlingTriangle, SmallValues) {
  const auto t0 = StirlingTriangle::build(3, 0.0);
  EXPECT_NEAR(std::exp(t0.log_value(3, 2)), 3.0, 1e-12);
  const auto th = StirlingTriangle::build(3, 0.5);
  EXPECT_NEAR(std::exp(th.log_value(3, 2)), 1.5, 1e-12);
  EXPECT_EQ(th.log_value(0, 0), 0.0);
  EXPECT_EQ(th.log_value(2, 0), -INFINITY);
  EXPECT_EQ(th.log_value(2, 3), -INFINITY);
  EXPECT_THROW(th.log_value(4, 1), std::out_of_range);
}

TEST(StirlingTriangle, DiagonalAndFirstColumn) {
  for (double a : {-4.0, 0.0, 0.5, 0.9}) {
    const auto t = StirlingTriangle::build(40, a);
    for (int m = 1; m <= 40; ++m) {
      EXPECT_EQ(t.log_value(m, m), 0.0);
      EXPECT_NEAR(t.log_value(m, 1), std::lgamma(m - a) - std::lgamma(1 - a),
                  1e-9 * std::max(1.0, std::fabs(t.log_value(m, 1))));
    }
  }
}

TEST(StirlingTriangle, AllEntriesFinite) {
  const auto t = StirlingTriangle::build(2000, -4.0);
  for (int m = 1; m <= 2000; m += 97) {
    for (int l = 1; l <= m; ++l) ASSERT_TRUE(std::isfinite(t.log_value(m, l)));
  }
}

TEST(StirlingTriangle, MatchesCompositionOracle) {
  for (double a : {-4.0, -1.0, -0.5, 0.0, 0.25, 0.5, 0.9}) {
    const auto t = StirlingTriangle::build(12, a);
    for (int m = 1; m <= 12; ++m) {
      for (int l = 1; l <= m; ++l) {
        const long double ref = stirling_oracle(m, l, a);
        const double got = std::exp(t.log_value(m, l));
        EXPECT_NEAR(got / static_cast<double>(ref), 1.0, 1e-9) << m << "," << l << " a=" << a;
      }
    }
  }
}

TEST(StirlingTriangle, MatchesAlternatingOracle) {
  for (double a : {-2.0, -0.5, 0.25, 0.5, 0.9}) {
    const auto t = StirlingTriangle::build(12, a);
    for (int m = 1; m <= 12; ++m) {
      for (int l = 1; l <= m; ++l) {
        const long double ref = stirling_alternating_oracle(m, l, a);
        EXPECT_NEAR(std::exp(t.log_value(m, l)) / static_cast<double>(ref), 1.0, 1e-9)
            << m << "," << l << " a=" << a;
      }
    }
  }
}

TEST(StirlingOracle, SpotValues) {
  EXPECT_NEAR(static_cast<double>(stirling_oracle(5, 5, -2.0)), 1.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(stirling_oracle(3, 1, 0.0)), 2.0, 1e-15);
  const auto t = StirlingTriangle::build(4, 0.5);
  EXPECT_NEAR(static_cast<double>(stirling_oracle(4, 2, 0.5)) / std::exp(t.log_value(4, 2)), 1.0,
              1e-10);
  EXPECT_THROW(stirling_oracle(15, 2, 0.5), std::invalid_argument);
}

TEST(StirlingTriangle, UnsignedRowSumsAreFactorials) {
  const auto t = StirlingTriangle::build(10, 0.0);
  for (int m = 1; m <= 10; ++m) {
    const auto row = t.row(m);
    EXPECT_NEAR(std::exp(log_sum_exp(row)) / std::tgamma(m + 1.0), 1.0, 1e-10);
  }
}

TEST(StirlingTriangle, ContinuousThroughZeroDiscount) {
  const auto t0 = StirlingTriangle::build(12, 0.0);
  for (double a : {1e-8, -1e-8}) {
    const auto t = StirlingTriangle::build(12, a);
    for (int m = 1; m <= 12; ++m) {
      for (int l = 1; l <= m; ++l) {
        EXPECT_NEAR(std::exp(t.log_value(m, l) - t0.log_value(m, l)), 1.0, 1e-5);
      }
    }
  }
}

TEST(StirlingTriangle, CoversChecksDiscountAndSize) {
  const auto t = StirlingTriangle::build(10, 0.5);
  EXPECT_TRUE(t.covers(10, 0.5));
  EXPECT_FALSE(t.covers(11, 0.5));
  EXPECT_FALSE(t.covers(5, 0.25));
  EXPECT_THROW(StirlingTriangle::build(5, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace gnbp
