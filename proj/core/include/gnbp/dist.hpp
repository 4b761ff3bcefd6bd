#pragma once

#include "gnbp/params.hpp"
#include "gnbp/random.hpp"
#include "gnbp/special.hpp"

namespace gnbp {

// Truncated negative binomial TNB(a, p): the prior law of a cluster size,
//
//   f(u) = Gamma(u - a) / (u! Gamma(1 - a)) * p^(u-1) * a p / (1 - (1-p)^a),
//
// u = 1, 2, ...; it becomes the logarithmic distribution as a -> 0.

double tnb_log_pmf(long u, double a, double p);

/// E[u] = a (1-p)^a / (1 - (1-p)^a) * p / (1 - p).
double tnb_mean(double a, double p);

/// Exact draw by sequential CDF inversion with the ratio
/// f(u+1) / f(u) = p (u - a) / (u + 1). Throws std::runtime_error if the
/// walk passes 1e9.
long tnb_sample(double a, double p, Rng& rng);

/// Negative binomial NB(r, p) log-PMF:
/// Gamma(m + r) / (m! Gamma(r)) p^m (1 - p)^r.
double nb_log_pmf(long m, double r, double p);

/// Generalized negative binomial gNB(gamma0, a, p) log-PMF, via
///
///   f(m) = p^m / m! * exp(-gamma0 (1 - (1-p)^a) / (a p^a))
///          * sum_{l=0}^{m} gamma0^l p^(-a l) S_a(m, l).
///
/// Reparameterized params are mapped to gamma0 = h0 (p / (1-p))^a first.
/// Throws std::invalid_argument unless the triangle covers (m, a).
double gnb_log_pmf(long m, const ModelParams& params,
                   const StirlingTriangle& triangle);

/// Compound-Poisson draw: m = sum of Pois(cluster_rate) TNB(a, p) sizes.
long gnb_sample(const ModelParams& params, Rng& rng);

struct Moments {
  double mean;
  double variance;
};

/// mean gamma0 (p/(1-p))^(1-a), variance mean * (1 - a p) / (1 - p).
Moments gnb_moments(const ModelParams& params);

}  // namespace gnbp
