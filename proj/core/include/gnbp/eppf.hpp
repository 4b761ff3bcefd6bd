#pragma once

#include <span>
#include <vector>

#include "gnbp/params.hpp"
#include "gnbp/partition.hpp"
#include "gnbp/special.hpp"

namespace gnbp {

// Exchangeable cluster / partition probability functions of the generalized
// negative binomial process. All functions depend on a partition only
// through its cluster sizes, so each takes either a Partition or the sizes.

/// log f(z, m): joint probability of the sample size m = sum(sizes) and the
/// canonical assignment vector z. Original form:
///
///   (1/m!) exp(-gamma0 F(a, p)) gamma0^l p^(m - a l) prod_k Gamma(n_k - a)/Gamma(1 - a)
///
/// with F(a, p) = (1 - (1-p)^a) / (a p^a). The Reparameterized form is
/// evaluated directly in h0 rather than by mapping to gamma0.
double log_ecpf(std::span<const int> sizes, const ModelParams& params);
double log_ecpf(const Partition& part, const ModelParams& params);

/// log sum_{l=0}^{m} w*^l S_a(m, l), the EPPF normalizer.
double log_eppf_normalizer(int m, const ModelParams& params,
                           const StirlingTriangle& triangle);

/// log f(z | m) = l log w* + sum_k log(Gamma(n_k - a)/Gamma(1 - a))
///                - log_eppf_normalizer(m).
/// Throws std::invalid_argument unless the triangle covers (m, a).
double log_eppf(std::span<const int> sizes, const ModelParams& params,
                const StirlingTriangle& triangle);
double log_eppf(const Partition& part, const ModelParams& params,
                const StirlingTriangle& triangle);

/// Unnormalized prediction-rule weights: n_k - a for each existing cluster
/// followed by w* for a new one (length l + 1).
std::vector<double> prediction_weights(std::span<const int> sizes,
                                       const ModelParams& params);

/// p_m(n) - p_{m+1}(n, 1) - sum_k p_{m+1}(n with n_k + 1). Zero when the
/// EPPF obeys the addition rule at this partition. Needs the triangle to
/// cover m + 1.
double addition_rule_residual(const Partition& part, const ModelParams& params,
                              const StirlingTriangle& triangle);

/// log P(restriction of Pi_m to the first j elements == sub), by summing the
/// EPPF over every extension of sub to a partition of [m]. m <= 12.
double log_size_dependent_eppf(const Partition& sub, int m,
                               const ModelParams& params,
                               const StirlingTriangle& triangle);

/// One-step closed form for the same quantity with m = j + 1:
///
///   f(z_{1:j} | j+1) = f(z_{1:j} | j) * N(j) / N(j+1) * (w* + j - a l_(j)),
///
/// with N the EPPF normalizer.
double log_size_dependent_eppf_next(const Partition& sub,
                                    const ModelParams& params,
                                    const StirlingTriangle& triangle);

}  // namespace gnbp
