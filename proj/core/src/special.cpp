#include "gnbp/special.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace gnbp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Below this size the ratio is summed term by term; above it a difference of
// lgammas is accurate enough and O(1).
constexpr long kDirectSumLimit = 32;

void require_discount(double a, const char* who) {
  if (!(a < 1.0)) {
    throw std::invalid_argument(std::string(who) +
                                ": discount must satisfy a < 1, got " +
                                std::to_string(a));
  }
}

}  // namespace

double log_gamma_ratio(long n, double a) {
  require_discount(a, "log_gamma_ratio");
  if (n < 1) {
    throw std::invalid_argument("log_gamma_ratio: n must be >= 1");
  }
  if (n <= kDirectSumLimit) {
    double total = 0.0;
    for (long j = 1; j < n; ++j) total += std::log(static_cast<double>(j) - a);
    return total;
  }
  return std::lgamma(static_cast<double>(n) - a) - std::lgamma(1.0 - a);
}

double log_factorial(long n) {
  if (n < 0) throw std::invalid_argument("log_factorial: n must be >= 0");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return kNegInf;
  const double top = *std::max_element(values.begin(), values.end());
  if (top == kNegInf) return kNegInf;
  if (std::isinf(top)) return top;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

double log_add_exp(double x, double y) {
  if (x < y) std::swap(x, y);
  if (y == kNegInf) return x;
  return x + std::log1p(std::exp(y - x));
}

double log_abs_expm1(double x) {
  if (x > 0.0) {
    // exp(x) - 1 = exp(x) (1 - exp(-x))
    return x + std::log(-std::expm1(-x));
  }
  return std::log(-std::expm1(x));
}

StirlingTriangle::StirlingTriangle(int m_max, double a)
    : discount_(a), m_max_(m_max), log_values_(offset(m_max + 1), kNegInf) {}

StirlingTriangle StirlingTriangle::build(int m_max, double a) {
  require_discount(a, "StirlingTriangle::build");
  if (m_max < 1) {
    throw std::invalid_argument("StirlingTriangle::build: m_max must be >= 1");
  }
  StirlingTriangle t(m_max, a);
  auto& v = t.log_values_;
  v[offset(0)] = 0.0;
  for (int m = 0; m < m_max; ++m) {
    const std::size_t cur = offset(m);
    const std::size_t next = offset(m + 1);
    // l = 0 stays -inf for m + 1 >= 1.
    for (int l = 1; l <= m + 1; ++l) {
      const double stay = (l <= m) ? std::log(m - a * l) + v[cur + l] : kNegInf;
      const double open = v[cur + l - 1];
      v[next + l] = log_add_exp(stay, open);
    }
  }
  return t;
}

double StirlingTriangle::log_value(int m, int l) const {
  if (m < 0 || m > m_max_) {
    throw std::out_of_range("StirlingTriangle::log_value: m outside table");
  }
  if (l < 0 || l > m) return kNegInf;
  return log_values_[offset(m) + static_cast<std::size_t>(l)];
}

std::span<const double> StirlingTriangle::row(int m) const {
  if (m < 0 || m > m_max_) {
    throw std::out_of_range("StirlingTriangle::row: m outside table");
  }
  return {log_values_.data() + offset(m), static_cast<std::size_t>(m) + 1};
}

long double stirling_oracle(int m, int l, double a) {
  require_discount(a, "stirling_oracle");
  if (m > 14) {
    throw std::invalid_argument("stirling_oracle: m > 14 overflows the oracle");
  }
  if (l < 1 || m < l) return 0.0L;

  const long double al = a;
  // w[n] = Gamma(n - a) / (n! Gamma(1 - a)), via the product (1-a)...(n-1-a)/n!
  std::vector<long double> w(static_cast<std::size_t>(m) + 1, 0.0L);
  for (int n = 1; n <= m; ++n) {
    long double prod = 1.0L;
    for (int j = 1; j < n; ++j) prod *= (static_cast<long double>(j) - al);
    long double fact = 1.0L;
    for (int j = 2; j <= n; ++j) fact *= j;
    w[static_cast<std::size_t>(n)] = prod / fact;
  }

  // Sum over ordered compositions of m into l positive parts.
  std::function<long double(int, int)> compose = [&](int remaining,
                                                     int parts) -> long double {
    if (parts == 1) return w[static_cast<std::size_t>(remaining)];
    long double acc = 0.0L;
    for (int n = 1; n <= remaining - (parts - 1); ++n) {
      acc += w[static_cast<std::size_t>(n)] * compose(remaining - n, parts - 1);
    }
    return acc;
  };

  long double scale = 1.0L;
  for (int j = 2; j <= m; ++j) scale *= j;
  for (int j = 2; j <= l; ++j) scale /= j;
  return scale * compose(m, l);
}

long double stirling_alternating_oracle(int m, int l, double a) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  require_discount(a, "stirling_alternating_oracle");
  if (a == 0.0) {
    throw std::invalid_argument(
        "stirling_alternating_oracle: the alternating form needs a != 0");
  }
  if (m > 14) {
    throw std::invalid_argument("stirling_alternating_oracle: m > 14");
  }
  if (l < 1 || m < l) return 0.0L;

  const Big ab = a;
  Big total = 0;
  Big binom = 1;  // C(l, k)
  for (int k = 0; k <= l; ++k) {
    // Gamma(m - a k) / Gamma(-a k) as the rising factorial (-a k)^(m); it is
    // 0 at k = 0 for m >= 1.
    Big rising = 1;
    const Big base = -ab * k;
    for (int j = 0; j < m; ++j) rising *= (base + j);
    const Big term = binom * rising;
    total += (k % 2 == 0) ? term : Big(-term);
    binom = binom * (l - k) / (k + 1);
  }
  Big denom = 1;
  for (int j = 2; j <= l; ++j) denom *= j;
  denom *= boost::multiprecision::pow(ab, l);
  return static_cast<long double>(total / denom);
}

}  // namespace gnbp
