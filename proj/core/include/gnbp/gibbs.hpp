#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnbp/params.hpp"
#include "gnbp/partition.hpp"
#include "gnbp/random.hpp"

namespace gnbp {

/// Observations, one per row.
using Points = Eigen::MatrixXd;

/// Gnbp: Original parameterization. ReparamGnbp: h0 parameterization.
/// NrmiAux: the h0 model with the p update of the normalized-measure
/// auxiliary-variable sampler (only a >= 0).
enum class Variant { Gnbp, ReparamGnbp, NrmiAux };

std::string_view to_string(Variant v) noexcept;
/// Accepts "gnbp", "reparam" / "reparam-gnbp", "nrmi" / "nrmi-aux".
std::optional<Variant> parse_variant(std::string_view text);
Parameterization parameterization_of(Variant v) noexcept;

/// Hyperpriors of the Gaussian mixture and of the process parameters.
struct Priors {
  double mass_shape = 1.0;       // e0
  double mass_rate = 1.0;        // f0
  double precision_shape = 1e-3; // c0
  double precision_rate = 1e-3;  // d0
  double base_mean_precision = 1e-3;
  double base_precision_shape = 1e-3;
  double base_precision_rate = 1e-3;
  double prob_alpha = 0.01;      // a0, Beta prior on p when a = 0
  double prob_beta = 0.01;       // b0
};

/// A parameter that is either held at value or resampled starting there.
struct Setting {
  double value = 0.0;
  bool learn = false;

  static Setting fixed(double v) { return {v, false}; }
  static Setting learned(double initial) { return {initial, true}; }
};

/// Gaussian-kernel hyperparameters: x ~ N(mu_k, I / precision),
/// mu_k ~ N(base_mean, I / base_precision).
struct Hypers {
  double precision = 1.0;
  Eigen::VectorXd base_mean;
  double base_precision = 1.0;
};

struct ChainConfig {
  int iterations = 15000;
  int burn_in = 5000;
  std::uint64_t seed = 0;
  int grid_points = 9999;
  Variant variant = Variant::Gnbp;
  Setting discount = Setting::learned(0.0);
  Setting prob = Setting::learned(0.5);
  Setting mass = Setting::learned(1.0);
  bool learn_hypers = true;
  /// Starting (or, with learn_hypers off, fixed) hyperparameters. When
  /// absent they are set from the data mean and variance.
  std::optional<Hypers> initial_hypers;
  Priors priors;
  /// Keep per-record cluster sizes and atoms (needed by predictive_density).
  bool record_states = true;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
  ModelParams initial_params() const;
};

/// Sampler state. Between sweeps, assignments are canonical (labels in
/// order of first appearance) and every label has at least one member.
struct MixtureState {
  std::vector<int> assignments;
  std::vector<int> counts;
  std::vector<Eigen::VectorXd> sums;
  std::vector<Eigen::VectorXd> atoms;
  double precision = 1.0;
  Eigen::VectorXd base_mean;
  double base_precision = 1.0;
  ModelParams params;

  int size() const noexcept { return static_cast<int>(assignments.size()); }
  int num_clusters() const noexcept { return static_cast<int>(counts.size()); }
  int dimension() const noexcept { return static_cast<int>(base_mean.size()); }
  Partition partition() const { return Partition::from_labels(assignments); }
};

/// All points in one cluster, atom at the data mean; hyperparameters from
/// config.initial_hypers or from the data (precision = base_precision =
/// 1 / pooled variance, base_mean = data mean).
MixtureState initial_state(const Points& data, const ChainConfig& config);

/// Throws std::logic_error if counts or sums disagree with the assignments
/// or labels are not canonical.
void check_consistency(const MixtureState& state, const Points& data);

/// Relabels in order of first appearance and recomputes cluster sums.
void canonicalize(MixtureState& state, const Points& data);

/// log N(x; mu, v I) with mu = (phi0 mu0 + phi sum) / (phi0 + n phi) and
/// v = 1/phi + 1/(phi0 + n phi): the atom-marginalized likelihood of x in a
/// cluster holding n other points with the given sum (n = 0 for a new one).
double log_predictive(const Eigen::Ref<const Eigen::VectorXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& cluster_sum, int n,
                      double precision, const Eigen::VectorXd& base_mean,
                      double base_precision);

/// One sweep of collapsed reassignments in a freshly shuffled order.
void assign_sweep(MixtureState& state, const Points& data, Rng& rng);
/// Same, visiting elements in the given order (a permutation of 0..m-1).
void assign_sweep(MixtureState& state, const Points& data,
                  std::span<const int> order, Rng& rng);

/// Draws every atom from its conjugate normal conditional.
void update_atoms(MixtureState& state, Rng& rng);

/// Draws precision, base_mean and base_precision in that order.
void update_hypers(MixtureState& state, const Points& data, const Priors& priors,
                   Rng& rng);

/// Rate of the gamma conditional of the mass: f0 + F(a, p) with the rate
/// factor of the state's parameterization.
double mass_conditional_rate(const ModelParams& params, const Priors& priors);
void update_mass(MixtureState& state, const Priors& priors, Rng& rng);

/// Discount grid a_g = 2 - 1/t_g, t_g = g / (grid_points + 1), with a table
/// of log Gamma(s - a_g)/Gamma(1 - a_g) for s <= max_size. NrmiAux keeps
/// only a_g >= 0.
class DiscountGrid {
 public:
  DiscountGrid(int grid_points, int max_size, Variant variant);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  int max_size() const noexcept { return max_size_; }
  /// log Gamma(s - a_g) / Gamma(1 - a_g), 1 <= s <= max_size.
  double log_gamma_ratio(std::size_t g, int s) const;

 private:
  std::vector<double> values_;
  std::vector<double> table_;
  int max_size_;
};

/// log f(z, m | mass, a_g, p) for every grid value, up to a constant.
std::vector<double> discount_log_weights(std::span<const int> sizes,
                                         const ModelParams& params,
                                         const DiscountGrid& grid);

/// Draws a from the discrete conditional over the grid. A grid of fewer
/// than two points leaves a unchanged.
void update_discount(MixtureState& state, const DiscountGrid& grid, Rng& rng);

/// Probability grid p_g = g / (grid_points + 1).
std::vector<double> prob_grid(int grid_points);

/// Unnormalized log conditional of p (uniform prior) for a != 0:
///   Gnbp:        -gamma0 F(a,p) + (m - a l) log p
///   ReparamGnbp: -h0 Fr(a,p) + m log p - a l log(1-p)
///   NrmiAux:     -h0 Fr(a,p) + (m-1) log p + (1 - a l) log(1-p)
double prob_log_conditional(double p, int m, int l, const ModelParams& params,
                            Variant variant);

/// a = 0: Beta(a0 + m, b0 + mass), or Beta(m, mass + 2) for NrmiAux.
/// Otherwise griddy Gibbs over prob_grid(grid_points). NrmiAux with a < 0
/// throws std::invalid_argument.
void update_prob(MixtureState& state, Variant variant, int grid_points,
                 const Priors& priors, Rng& rng);

/// One prediction-rule sweep over a partition with no data attached,
/// visiting elements 0..m-1 unless an order is given.
Partition prior_partition_sweep(const Partition& part, const ModelParams& params,
                                Rng& rng);
Partition prior_partition_sweep(const Partition& part, const ModelParams& params,
                                std::span<const int> order, Rng& rng);

struct TraceRecord {
  int iteration = 0;
  int sample_size = 0;
  int num_clusters = 0;
  int unit_clusters = 0;
  /// l among the first j elements (prior chains only, else -1).
  int subsample_clusters = -1;
  double mass = 0.0;
  double discount = 0.0;
  double prob = 0.0;
  double precision = 0.0;
  std::vector<double> base_mean;
  double base_precision = 0.0;
  double log_ecpf = 0.0;
  /// Cluster sizes and atoms in canonical label order (empty when states
  /// are not recorded).
  std::vector<int> sizes;
  std::vector<std::vector<double>> atoms;

  bool operator==(const TraceRecord&) const = default;
};

struct Trace {
  std::string kind = "posterior";  // or "prior"
  ChainConfig config;
  int dimension = 0;
  std::vector<TraceRecord> records;
};

/// The full sampler. Per iteration: assign_sweep, update_atoms, then
/// update_hypers, update_mass, update_discount, update_prob for whichever
/// are learned. Records every iteration after burn_in.
Trace run_chain(const Points& data, const ChainConfig& config);

struct PriorChainConfig {
  int m = 20;
  int subsample = 0;  // j; 0 means m
  int iterations = 15000;
  int burn_in = 5000;
  std::uint64_t seed = 0;
};

/// Prediction-rule Gibbs over partitions of [m] from a uniformly random
/// labelling; records l and l among the first j elements.
Trace run_prior_chain(const ModelParams& params, const PriorChainConfig& config);

/// Monte Carlo average over recorded states of
///   [sum_k (n_k - a) N(x; mu_k, 1/phi) + w* N(x; mu0, 1/phi0 + 1/phi)]
///   / (m - a l + w*).
/// One-dimensional traces with recorded states only.
std::vector<double> predictive_density(const Trace& trace,
                                       std::span<const double> grid);

}  // namespace gnbp
