#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gnbp {

/// log(Gamma(n - a) / Gamma(1 - a)) = sum_{j=1}^{n-1} log(j - a).
///
/// Exact (returns 0) at n = 1. Throws std::invalid_argument for n < 1 or
/// a >= 1, where Gamma(1 - a) has a pole.
double log_gamma_ratio(long n, double a);

/// log(n!)
double log_factorial(long n);

/// Numerically stable log(sum(exp(values))). Returns -inf for an empty span
/// or when every entry is -inf.
double log_sum_exp(std::span<const double> values);

/// log(exp(x) + exp(y))
double log_add_exp(double x, double y);

/// log|exp(x) - 1| without cancellation near x = 0 or overflow for large x.
double log_abs_expm1(double x);

/// Log-space table of generalized Stirling numbers of the first kind
/// S_a(m, l), 0 <= l <= m <= m_max, built from
///
///   S_a(0, 0) = 1,  S_a(m, 0) = 0 for m >= 1,
///   S_a(m + 1, l) = (m - a l) S_a(m, l) + S_a(m, l - 1).
///
/// For a < 1 every coefficient m - a l with l <= m is positive, so all
/// entries with 1 <= l <= m are strictly positive and the table can be kept
/// entirely in log space. The table is immutable once built.
class StirlingTriangle {
 public:
  static StirlingTriangle build(int m_max, double a);

  double discount() const noexcept { return discount_; }
  int m_max() const noexcept { return m_max_; }

  /// log S_a(m, l); -inf where S_a(m, l) = 0 (l = 0 < m, or l > m).
  double log_value(int m, int l) const;

  /// Entries l = 0..m of row m.
  std::span<const double> row(int m) const;

  /// True if the table can serve probability evaluations at sample size m
  /// with discount a.
  bool covers(int m, double a) const noexcept {
    return a == discount_ && m >= 0 && m <= m_max_;
  }

 private:
  StirlingTriangle(int m_max, double a);

  static std::size_t offset(int m) noexcept {
    return static_cast<std::size_t>(m) * (static_cast<std::size_t>(m) + 1) / 2;
  }

  double discount_;
  int m_max_;
  std::vector<double> log_values_;
};

/// Composition-sum form of S_a(m, l):
///
///   (m! / l!) * sum over (n_1..n_l), n_k >= 1, sum n_k = m, of
///   prod_k Gamma(n_k - a) / (n_k! Gamma(1 - a)).
///
/// Oracle only; enumerates compositions directly. Refuses m > 14.
long double stirling_oracle(int m, int l, double a);

/// Alternating-sum form of S_a(m, l):
///
///   (1 / (l! a^l)) * sum_{k=0}^{l} (-1)^k C(l, k) Gamma(m - a k) / Gamma(-a k),
///
/// evaluated in 50-digit arithmetic. Oracle only; requires a != 0 and
/// m <= 14.
long double stirling_alternating_oracle(int m, int l, double a);

}  // namespace gnbp
