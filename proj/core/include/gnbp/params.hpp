#pragma once

#include <string>
#include <string_view>

namespace gnbp {

/// Which mass parameter the model carries.
///
/// Original: mass is gamma0 and the random measure has scale (1-p)/p.
/// Reparameterized: mass is h0 of a unit-scale random measure; the two are
/// tied by gamma0 = h0 (p / (1 - p))^a.
enum class Parameterization { Original, Reparameterized };

std::string_view to_string(Parameterization p) noexcept;

/// Below this |a| every formula switches to its a -> 0 (NB / logarithmic)
/// limit.
inline constexpr double kZeroDiscountThreshold = 1e-8;

/// Evaluators keep p inside [kProbGuard, 1 - kProbGuard].
inline constexpr double kProbGuard = 1e-6;

inline bool is_zero_discount(double a) noexcept {
  return a > -kZeroDiscountThreshold && a < kZeroDiscountThreshold;
}

struct GuardedProb {
  double value;
  bool clamped;
};

/// Clamps p into the evaluator range, flagging when it had to.
GuardedProb guard_prob(double p) noexcept;

/// The (mass, discount, probability) triple that governs every formula.
struct ModelParams {
  double mass = 1.0;
  double discount = 0.0;
  double prob = 0.5;
  Parameterization parameterization = Parameterization::Original;

  /// Throws std::invalid_argument unless mass > 0, a < 1 and 0 < p < 1.
  void validate() const;

  /// Weight of opening a new cluster in the prediction rule:
  /// gamma0 p^-a (Original) or h0 (1-p)^-a (Reparameterized).
  double new_cluster_weight() const;
  double log_new_cluster_weight() const;

  /// Poisson rate of the number of clusters.
  double cluster_rate() const;

  /// The same model expressed with gamma0 (Original) or h0 (Reparameterized).
  ModelParams to_original() const;
  ModelParams to_reparameterized() const;

  ModelParams with_discount(double a) const {
    ModelParams out = *this;
    out.discount = a;
    return out;
  }
  ModelParams with_prob(double p) const {
    ModelParams out = *this;
    out.prob = p;
    return out;
  }
  ModelParams with_mass(double m) const {
    ModelParams out = *this;
    out.mass = m;
    return out;
  }
};

/// log of (1 - (1-p)^a) / (a p^a); tends to log(-ln(1-p)) as a -> 0.
/// Computed without overflow for very negative a (may return +inf).
double log_original_rate_factor(double a, double p);

/// log of (1 - (1-p)^a) / (a (1-p)^a) = log(((1-p)^-a - 1) / a); tends to
/// log(-ln(1-p)) as a -> 0.
double log_reparam_rate_factor(double a, double p);

/// Rate factor matching the parameterization; cluster_rate = mass * factor.
double log_rate_factor(Parameterization param, double a, double p);

/// The same factors from precomputed log p and log(1 - p), for grid sweeps.
/// No guarding is applied.
double log_original_rate_factor_from_logs(double a, double log_p, double log_q);
double log_reparam_rate_factor_from_log_q(double a, double log_q);

}  // namespace gnbp
