#include "gnbp/eppf.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace gnbp {

namespace {

int total_size(std::span<const int> sizes) {
  int m = 0;
  for (int n : sizes) {
    if (n < 1) throw std::invalid_argument("cluster sizes must be >= 1");
    m += n;
  }
  return m;
}

double sum_log_gamma_ratios(std::span<const int> sizes, double a) {
  double acc = 0.0;
  for (int n : sizes) acc += log_gamma_ratio(n, a);
  return acc;
}

void require_cover(const StirlingTriangle& triangle, int m, double a,
                   const char* who) {
  if (!triangle.covers(m, a)) {
    throw std::invalid_argument(std::string(who) +
                                ": Stirling triangle does not match (m, discount)");
  }
}

}  // namespace

double log_ecpf(std::span<const int> sizes, const ModelParams& params) {
  params.validate();
  const int m = total_size(sizes);
  const double l = static_cast<double>(sizes.size());
  const double a = params.discount;
  const double p = guard_prob(params.prob).value;
  const double shared = -log_factorial(m) + sum_log_gamma_ratios(sizes, a);
  const double rate = params.mass * std::exp(log_rate_factor(params.parameterization, a, p));
  if (params.parameterization == Parameterization::Original) {
    return shared - rate + l * std::log(params.mass) + (m - a * l) * std::log(p);
  }
  return shared - rate + m * std::log(p) + l * std::log(params.mass) -
         a * l * std::log1p(-p);
}

double log_ecpf(const Partition& part, const ModelParams& params) {
  return log_ecpf(part.sizes(), params);
}

double log_eppf_normalizer(int m, const ModelParams& params,
                           const StirlingTriangle& triangle) {
  require_cover(triangle, m, params.discount, "log_eppf_normalizer");
  const double log_w = params.log_new_cluster_weight();
  const auto row = triangle.row(m);
  std::vector<double> terms(row.size());
  for (std::size_t l = 0; l < row.size(); ++l) {
    terms[l] = static_cast<double>(l) * log_w + row[l];
  }
  return log_sum_exp(terms);
}

double log_eppf(std::span<const int> sizes, const ModelParams& params,
                const StirlingTriangle& triangle) {
  params.validate();
  const int m = total_size(sizes);
  require_cover(triangle, m, params.discount, "log_eppf");
  return static_cast<double>(sizes.size()) * params.log_new_cluster_weight() +
         sum_log_gamma_ratios(sizes, params.discount) -
         log_eppf_normalizer(m, params, triangle);
}

double log_eppf(const Partition& part, const ModelParams& params,
                const StirlingTriangle& triangle) {
  return log_eppf(part.sizes(), params, triangle);
}

std::vector<double> prediction_weights(std::span<const int> sizes,
                                       const ModelParams& params) {
  params.validate();
  std::vector<double> w;
  w.reserve(sizes.size() + 1);
  for (int n : sizes) {
    if (n < 1) throw std::invalid_argument("prediction_weights: sizes must be >= 1");
    w.push_back(static_cast<double>(n) - params.discount);
  }
  w.push_back(params.new_cluster_weight());
  return w;
}

double addition_rule_residual(const Partition& part, const ModelParams& params,
                              const StirlingTriangle& triangle) {
  std::vector<int> sizes = part.sizes();
  double residual = std::exp(log_eppf(sizes, params, triangle));
  sizes.push_back(1);
  residual -= std::exp(log_eppf(sizes, params, triangle));
  sizes.pop_back();
  for (auto& n : sizes) {
    ++n;
    residual -= std::exp(log_eppf(sizes, params, triangle));
    --n;
  }
  return residual;
}

double log_size_dependent_eppf(const Partition& sub, int m,
                               const ModelParams& params,
                               const StirlingTriangle& triangle) {
  const int j = sub.size();
  if (j < 1 || m < j) {
    throw std::invalid_argument("log_size_dependent_eppf: need 1 <= j <= m");
  }
  if (m > SetPartitions::kMaxElements) {
    throw std::invalid_argument("log_size_dependent_eppf: m > 12 is not enumerable");
  }
  require_cover(triangle, m, params.discount, "log_size_dependent_eppf");

  // Elements j..m-1 join an existing block or open a new one; each set
  // partition of [m] restricting to sub is generated exactly once.
  std::vector<int> sizes = sub.sizes();
  std::vector<double> terms;
  std::function<void(int)> extend = [&](int element) {
    if (element == m) {
      terms.push_back(log_eppf(sizes, params, triangle));
      return;
    }
    // Index loop: the recursion appends to sizes and may reallocate it.
    for (std::size_t k = 0, l = sizes.size(); k < l; ++k) {
      ++sizes[k];
      extend(element + 1);
      --sizes[k];
    }
    sizes.push_back(1);
    extend(element + 1);
    sizes.pop_back();
  };
  extend(j);
  return log_sum_exp(terms);
}

double log_size_dependent_eppf_next(const Partition& sub,
                                    const ModelParams& params,
                                    const StirlingTriangle& triangle) {
  const int j = sub.size();
  if (j < 1) throw std::invalid_argument("log_size_dependent_eppf_next: empty partition");
  require_cover(triangle, j + 1, params.discount, "log_size_dependent_eppf_next");
  const double l = static_cast<double>(sub.num_clusters());
  return log_eppf(sub, params, triangle) +
         log_eppf_normalizer(j, params, triangle) -
         log_eppf_normalizer(j + 1, params, triangle) +
         std::log(params.new_cluster_weight() + j - params.discount * l);
}

}  // namespace gnbp
