#pragma once

#include <string>
#include <vector>

#include "gnbp/params.hpp"
#include "gnbp/random.hpp"
#include "gnbp/special.hpp"

namespace gnbp {

/// Unordered cluster sizes of one prior draw; the sample size is their sum.
struct ClusterStructure {
  std::vector<long> sizes;

  std::size_t clusters() const noexcept { return sizes.size(); }
  long sample_size() const noexcept;
};

/// Draws l ~ Pois(cluster_rate) clusters with iid TNB(a, p) sizes.
ClusterStructure simulate_prior(const ModelParams& params, Rng& rng);

/// f_L(l | m) for l = 0..m:
///   w*^l S_a(m, l) / sum_l' w*^l' S_a(m, l')
/// with w* the new-cluster weight. f_L(0 | m) = 0 for m >= 1.
std::vector<double> cluster_number_pmf(int m, const ModelParams& params,
                                       const StirlingTriangle& triangle);

/// Probability parameter that gives E[m] = expected_m:
///   Original:        p = 1 - (1 + (E[m]/gamma0)^(1/(1-a)))^-1
///   Reparameterized: p = E[m] / (h0 + E[m])
/// The result is not guarded; very large E[m] may round to 1.
double solve_prob(double expected_m, double mass, double a,
                  Parameterization param);

/// Leading-order growth of an expectation as E[m] -> infinity.
enum class GrowthKind {
  PowerLaw,       // coefficient * E[m]^exponent
  Logarithmic,    // coefficient * ln E[m]
  LinearOverLog,  // coefficient * E[m] / ln E[m]
  Bounded,        // tends to limit
};

struct Growth {
  GrowthKind kind;
  double exponent = 0.0;
  double coefficient = 0.0;
  double limit = 0.0;
};

std::string to_string(const Growth& g);

struct AsymptoticEstimate {
  double value;
  Growth regime;
};

/// Closed-form E[l] at the given E[m] (p solved from E[m]) with its
/// large-sample regime. Uses params.mass, discount and parameterization;
/// params.prob is ignored.
AsymptoticEstimate expected_clusters(double expected_m, const ModelParams& params);

/// E[n_k] = TNB mean at the solved p, with its large-sample regime.
AsymptoticEstimate expected_cluster_size(double expected_m,
                                         const ModelParams& params);

/// Lower bound max{a, 0} on the prior probability of a unit-size cluster.
double unit_size_lower_bound(double a);

}  // namespace gnbp
