#include "gnbp/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gnbp/special.hpp"

namespace gnbp {

double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::size_t draw_categorical(std::span<const double> weights, Rng& rng) {
  if (weights.empty()) {
    throw std::invalid_argument("draw_categorical: empty weight vector");
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::domain_error("draw_categorical: weights must have a positive finite sum");
  }
  double target = uniform01(rng) * total;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    target -= weights[k];
    if (target < 0.0) return k;
  }
  // Rounding can leave a sliver of mass; give it to the last positive weight.
  std::size_t last = weights.size() - 1;
  while (last > 0 && weights[last] <= 0.0) --last;
  return last;
}

std::size_t draw_log_categorical(std::span<const double> log_weights, Rng& rng) {
  const double top = log_weights.empty()
                         ? -INFINITY
                         : *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) {
    throw std::domain_error("draw_log_categorical: no finite log-weight");
  }
  std::vector<double> w(log_weights.size());
  std::transform(log_weights.begin(), log_weights.end(), w.begin(),
                 [top](double lw) { return std::exp(lw - top); });
  return draw_categorical(w, rng);
}

long draw_poisson(double rate, Rng& rng) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("draw_poisson: rate must be finite and >= 0");
  }
  if (rate == 0.0) return 0;
  return std::poisson_distribution<long>(rate)(rng);
}

double draw_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::domain_error("draw_gamma: shape and rate must be positive");
  }
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

namespace {

// log of a Gamma(shape, 1) draw; small shapes use the identity
// G(s) = G(s + 1) U^(1/s) so the draw cannot underflow to zero.
double draw_log_gamma(double shape, Rng& rng) {
  if (shape >= 1.0) return std::log(draw_gamma(shape, 1.0, rng));
  const double g = draw_gamma(shape + 1.0, 1.0, rng);
  double u = uniform01(rng);
  while (u == 0.0) u = uniform01(rng);
  return std::log(g) + std::log(u) / shape;
}

}  // namespace

double draw_beta(double alpha, double beta, Rng& rng) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("draw_beta: parameters must be positive");
  }
  const double lx = draw_log_gamma(alpha, rng);
  const double ly = draw_log_gamma(beta, rng);
  // x / (x + y) = 1 / (1 + exp(ly - lx))
  return 1.0 / (1.0 + std::exp(ly - lx));
}

double draw_normal(double mean, double stddev, Rng& rng) {
  return std::normal_distribution<double>(mean, stddev)(rng);
}

}  // namespace gnbp
