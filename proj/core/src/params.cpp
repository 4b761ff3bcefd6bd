#include "gnbp/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gnbp/special.hpp"

namespace gnbp {

std::string_view to_string(Parameterization p) noexcept {
  return p == Parameterization::Original ? "original" : "reparameterized";
}

GuardedProb guard_prob(double p) noexcept {
  if (p < kProbGuard) return {kProbGuard, true};
  if (p > 1.0 - kProbGuard) return {1.0 - kProbGuard, true};
  return {p, false};
}

void ModelParams::validate() const {
  std::ostringstream err;
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    err << "mass must be a positive finite number, got " << mass;
  } else if (!(discount < 1.0) || !std::isfinite(discount)) {
    err << "discount must satisfy a < 1, got " << discount;
  } else if (!(prob > 0.0 && prob < 1.0)) {
    err << "probability must lie in (0, 1), got " << prob;
  } else {
    return;
  }
  throw std::invalid_argument(err.str());
}

double ModelParams::log_new_cluster_weight() const {
  const double p = guard_prob(prob).value;
  if (parameterization == Parameterization::Original) {
    return std::log(mass) - discount * std::log(p);
  }
  return std::log(mass) - discount * std::log1p(-p);
}

double ModelParams::new_cluster_weight() const {
  return std::exp(log_new_cluster_weight());
}

double ModelParams::cluster_rate() const {
  return mass * std::exp(log_rate_factor(parameterization, discount, prob));
}

ModelParams ModelParams::to_original() const {
  if (parameterization == Parameterization::Original) return *this;
  const double p = guard_prob(prob).value;
  ModelParams out = *this;
  out.parameterization = Parameterization::Original;
  out.mass = mass * std::exp(discount * (std::log(p) - std::log1p(-p)));
  return out;
}

ModelParams ModelParams::to_reparameterized() const {
  if (parameterization == Parameterization::Reparameterized) return *this;
  const double p = guard_prob(prob).value;
  ModelParams out = *this;
  out.parameterization = Parameterization::Reparameterized;
  out.mass = mass * std::exp(discount * (std::log1p(-p) - std::log(p)));
  return out;
}

double log_original_rate_factor_from_logs(double a, double log_p, double log_q) {
  if (is_zero_discount(a)) return std::log(-log_q);
  // |expm1(a log q)| / |a| * p^-a
  return log_abs_expm1(a * log_q) - std::log(std::fabs(a)) - a * log_p;
}

double log_reparam_rate_factor_from_log_q(double a, double log_q) {
  if (is_zero_discount(a)) return std::log(-log_q);
  return log_abs_expm1(-a * log_q) - std::log(std::fabs(a));
}

double log_original_rate_factor(double a, double p) {
  p = guard_prob(p).value;
  return log_original_rate_factor_from_logs(a, std::log(p), std::log1p(-p));
}

double log_reparam_rate_factor(double a, double p) {
  p = guard_prob(p).value;
  return log_reparam_rate_factor_from_log_q(a, std::log1p(-p));
}

double log_rate_factor(Parameterization param, double a, double p) {
  return param == Parameterization::Original ? log_original_rate_factor(a, p)
                                             : log_reparam_rate_factor(a, p);
}

}  // namespace gnbp
