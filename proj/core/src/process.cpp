#include "gnbp/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gnbp/dist.hpp"

namespace gnbp {

long ClusterStructure::sample_size() const noexcept {
  return std::accumulate(sizes.begin(), sizes.end(), 0L);
}

ClusterStructure simulate_prior(const ModelParams& params, Rng& rng) {
  params.validate();
  ClusterStructure out;
  const long l = draw_poisson(params.cluster_rate(), rng);
  out.sizes.reserve(static_cast<std::size_t>(l));
  for (long k = 0; k < l; ++k) {
    out.sizes.push_back(tnb_sample(params.discount, params.prob, rng));
  }
  return out;
}

std::vector<double> cluster_number_pmf(int m, const ModelParams& params,
                                       const StirlingTriangle& triangle) {
  params.validate();
  if (!triangle.covers(m, params.discount)) {
    throw std::invalid_argument(
        "cluster_number_pmf: Stirling triangle does not match (m, discount)");
  }
  const double log_w = params.log_new_cluster_weight();
  const auto row = triangle.row(m);
  std::vector<double> logs(row.size());
  for (std::size_t l = 0; l < row.size(); ++l) {
    logs[l] = static_cast<double>(l) * log_w + row[l];
  }
  const double norm = log_sum_exp(logs);
  std::vector<double> pmf(logs.size());
  std::transform(logs.begin(), logs.end(), pmf.begin(),
                 [norm](double v) { return std::exp(v - norm); });
  return pmf;
}

double solve_prob(double expected_m, double mass, double a,
                  Parameterization param) {
  if (!(expected_m > 0.0)) {
    throw std::invalid_argument("solve_prob: expected_m must be positive");
  }
  if (!(mass > 0.0)) throw std::invalid_argument("solve_prob: mass must be positive");
  if (!(a < 1.0)) throw std::invalid_argument("solve_prob: discount must be < 1");
  if (param == Parameterization::Reparameterized) {
    return expected_m / (mass + expected_m);
  }
  // p / (1 - p) = (E[m] / gamma0)^(1/(1-a))
  const double odds = std::pow(expected_m / mass, 1.0 / (1.0 - a));
  return odds / (1.0 + odds);
}

std::string to_string(const Growth& g) {
  std::ostringstream os;
  switch (g.kind) {
    case GrowthKind::PowerLaw:
      os << "power-law(exponent=" << g.exponent << ")";
      break;
    case GrowthKind::Logarithmic:
      os << "logarithmic";
      break;
    case GrowthKind::LinearOverLog:
      os << "linear-over-log";
      break;
    case GrowthKind::Bounded:
      os << "bounded(limit=" << g.limit << ")";
      break;
  }
  return os.str();
}

namespace {

Growth cluster_count_growth(const ModelParams& params) {
  const double a = params.discount;
  const double mass = params.mass;
  const bool zero = is_zero_discount(a);
  if (params.parameterization == Parameterization::Original) {
    if (zero) return {GrowthKind::Logarithmic, 0.0, mass, 0.0};
    if (a < 0.0) {
      return {GrowthKind::PowerLaw, -a / (1.0 - a),
              std::pow(mass, 1.0 / (1.0 - a)) / (-a), 0.0};
    }
    return {GrowthKind::Bounded, 0.0, 0.0, mass / a};
  }
  if (zero) return {GrowthKind::Logarithmic, 0.0, mass, 0.0};
  if (a < 0.0) return {GrowthKind::Bounded, 0.0, 0.0, mass / (-a)};
  return {GrowthKind::PowerLaw, a, std::pow(mass, 1.0 - a) / a, 0.0};
}

Growth cluster_size_growth(const ModelParams& params) {
  const double a = params.discount;
  const double mass = params.mass;
  const bool zero = is_zero_discount(a);
  if (zero) return {GrowthKind::LinearOverLog, 0.0, 1.0 / mass, 0.0};
  if (params.parameterization == Parameterization::Original) {
    if (a < 0.0) {
      return {GrowthKind::PowerLaw, 1.0 / (1.0 - a),
              -a / std::pow(mass, 1.0 / (1.0 - a)), 0.0};
    }
    return {GrowthKind::PowerLaw, 1.0, a / mass, 0.0};
  }
  if (a < 0.0) return {GrowthKind::PowerLaw, 1.0, -a / mass, 0.0};
  return {GrowthKind::PowerLaw, 1.0 - a, a / std::pow(mass, 1.0 - a), 0.0};
}

void check_expectation_inputs(double expected_m, const ModelParams& params) {
  if (!(expected_m > 0.0)) {
    throw std::invalid_argument("expected_m must be positive");
  }
  if (!(params.mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(params.discount < 1.0)) {
    throw std::invalid_argument("discount must satisfy a < 1");
  }
}

}  // namespace

AsymptoticEstimate expected_clusters(double expected_m, const ModelParams& params) {
  check_expectation_inputs(expected_m, params);
  const double a = params.discount;
  const double mass = params.mass;
  double value;
  if (is_zero_discount(a)) {
    value = mass * std::log1p(expected_m / mass);
  } else if (params.parameterization == Parameterization::Original) {
    // (gamma0 / a) ((r + 1)^a - r^a), r = (gamma0 / E[m])^(1/(1-a))
    const double log_r = std::log(mass / expected_m) / (1.0 - a);
    const double r = std::exp(log_r);
    value = mass / a * (std::exp(a * std::log1p(r)) - std::exp(a * log_r));
  } else {
    value = mass * std::expm1(a * std::log1p(expected_m / mass)) / a;
  }
  return {value, cluster_count_growth(params)};
}

AsymptoticEstimate expected_cluster_size(double expected_m,
                                         const ModelParams& params) {
  check_expectation_inputs(expected_m, params);
  // Works from the odds p / (1 - p) directly: p can be closer to 1 than the
  // probability guard allows.
  const double a = params.discount;
  double log_odds = std::log(expected_m / params.mass);
  if (params.parameterization == Parameterization::Original) log_odds /= 1.0 - a;
  const double odds = std::exp(log_odds);
  const double log_q = log_odds > 0.0 ? -(log_odds + std::log1p(std::exp(-log_odds)))
                                      : -std::log1p(odds);  // log(1 - p)
  const double value = is_zero_discount(a)
                           ? odds / -log_q
                           : odds * a * std::exp(a * log_q) / -std::expm1(a * log_q);
  return {value, cluster_size_growth(params)};
}

double unit_size_lower_bound(double a) {
  if (!(a < 1.0)) throw std::invalid_argument("discount must satisfy a < 1");
  return std::max(a, 0.0);
}

}  // namespace gnbp
