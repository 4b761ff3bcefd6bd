#include "gnbp/dist.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gnbp {

namespace {

constexpr long kTnbSampleCap = 1'000'000'000L;

void check_discount(double a) {
  if (!(a < 1.0)) throw std::invalid_argument("discount must satisfy a < 1");
}

}  // namespace

double tnb_log_pmf(long u, double a, double p) {
  if (u < 1) throw std::invalid_argument("tnb_log_pmf: u must be >= 1");
  check_discount(a);
  p = guard_prob(p).value;
  // a p / (1 - (1-p)^a) = p^(1-a) / F with F the original rate factor; the
  // a -> 0 limit of F turns this into the logarithmic PMF.
  return log_gamma_ratio(u, a) - log_factorial(u) +
         static_cast<double>(u - 1) * std::log(p) + (1.0 - a) * std::log(p) -
         log_original_rate_factor(a, p);
}

double tnb_mean(double a, double p) {
  check_discount(a);
  p = guard_prob(p).value;
  // p^(1-a) (1-p)^(a-1) / F
  return std::exp((1.0 - a) * (std::log(p) - std::log1p(-p)) -
                  log_original_rate_factor(a, p));
}

long tnb_sample(double a, double p, Rng& rng) {
  check_discount(a);
  p = guard_prob(p).value;
  const double target = uniform01(rng);
  double prob = std::exp(tnb_log_pmf(1, a, p));
  double cdf = prob;
  long u = 1;
  while (target > cdf) {
    prob *= p * (static_cast<double>(u) - a) / static_cast<double>(u + 1);
    ++u;
    cdf += prob;
    // Accumulated rounding can leave cdf a hair below 1; once the remaining
    // terms underflow the walk has reached the end of the support.
    if (prob == 0.0) break;
    if (u >= kTnbSampleCap) {
      throw std::runtime_error("tnb_sample: inversion exceeded 1e9 steps");
    }
  }
  return u;
}

double nb_log_pmf(long m, double r, double p) {
  if (m < 0) throw std::invalid_argument("nb_log_pmf: m must be >= 0");
  p = guard_prob(p).value;
  return std::lgamma(static_cast<double>(m) + r) - log_factorial(m) -
         std::lgamma(r) + static_cast<double>(m) * std::log(p) +
         r * std::log1p(-p);
}

double gnb_log_pmf(long m, const ModelParams& params,
                   const StirlingTriangle& triangle) {
  if (m < 0) throw std::invalid_argument("gnb_log_pmf: m must be >= 0");
  params.validate();
  if (!triangle.covers(static_cast<int>(m), params.discount)) {
    throw std::invalid_argument(
        "gnb_log_pmf: Stirling triangle does not match (m, discount)");
  }
  const ModelParams orig = params.to_original();
  const double a = orig.discount;
  const double p = guard_prob(orig.prob).value;
  const double gamma0 = orig.mass;
  if (is_zero_discount(a)) return nb_log_pmf(m, gamma0, p);

  const double log_w = std::log(gamma0) - a * std::log(p);
  const auto row = triangle.row(static_cast<int>(m));
  std::vector<double> terms(row.size());
  for (std::size_t l = 0; l < row.size(); ++l) {
    terms[l] = static_cast<double>(l) * log_w + row[l];
  }
  return static_cast<double>(m) * std::log(p) - log_factorial(m) -
         gamma0 * std::exp(log_original_rate_factor(a, p)) + log_sum_exp(terms);
}

long gnb_sample(const ModelParams& params, Rng& rng) {
  params.validate();
  const long clusters = draw_poisson(params.cluster_rate(), rng);
  long m = 0;
  for (long k = 0; k < clusters; ++k) {
    m += tnb_sample(params.discount, params.prob, rng);
  }
  return m;
}

Moments gnb_moments(const ModelParams& params) {
  params.validate();
  const ModelParams orig = params.to_original();
  const double p = guard_prob(orig.prob).value;
  const double a = orig.discount;
  const double mean =
      orig.mass * std::exp((1.0 - a) * (std::log(p) - std::log1p(-p)));
  return {mean, mean * (1.0 - a * p) / (1.0 - p)};
}

}  // namespace gnbp
