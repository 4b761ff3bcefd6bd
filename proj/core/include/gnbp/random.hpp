#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace gnbp {

/// One RNG per chain; never shared across threads.
using Rng = std::mt19937_64;

double uniform01(Rng& rng);

/// Index drawn with probability proportional to the non-negative weights.
std::size_t draw_categorical(std::span<const double> weights, Rng& rng);

/// Index drawn with probability proportional to exp(log_weights). Entries of
/// -inf get zero probability. Throws std::domain_error if all are -inf.
std::size_t draw_log_categorical(std::span<const double> log_weights, Rng& rng);

long draw_poisson(double rate, Rng& rng);

/// Gamma with the given shape and rate (mean shape / rate).
double draw_gamma(double shape, double rate, Rng& rng);

double draw_beta(double alpha, double beta, Rng& rng);

double draw_normal(double mean, double stddev, Rng& rng);

}  // namespace gnbp
