#include "gnbp/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gnbp/eppf.hpp"
#include "gnbp/special.hpp"

namespace gnbp {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Gnbp:
      return "gnbp";
    case Variant::ReparamGnbp:
      return "reparam";
    case Variant::NrmiAux:
      return "nrmi";
  }
  return "gnbp";
}

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "gnbp" || text == "original") return Variant::Gnbp;
  if (text == "reparam" || text == "reparam-gnbp") return Variant::ReparamGnbp;
  if (text == "nrmi" || text == "nrmi-aux") return Variant::NrmiAux;
  return std::nullopt;
}

Parameterization parameterization_of(Variant v) noexcept {
  return v == Variant::Gnbp ? Parameterization::Original
                            : Parameterization::Reparameterized;
}

void ChainConfig::validate() const {
  std::ostringstream err;
  if (iterations < 1) {
    err << "iterations must be >= 1";
  } else if (burn_in < 0 || burn_in >= iterations) {
    err << "burn_in must satisfy 0 <= burn_in < iterations";
  } else if (grid_points < 10) {
    err << "grid_points must be >= 10";
  } else if (!(discount.value < 1.0) || !std::isfinite(discount.value)) {
    err << "discount must satisfy a < 1";
  } else if (variant == Variant::NrmiAux && discount.value < 0.0 &&
             !is_zero_discount(discount.value)) {
    err << "the nrmi variant does not allow a < 0";
  } else if (!(prob.value > 0.0 && prob.value < 1.0)) {
    err << "probability must lie in (0, 1)";
  } else if (!(mass.value > 0.0) || !std::isfinite(mass.value)) {
    err << "mass must be positive";
  } else if (initial_hypers &&
             (!(initial_hypers->precision > 0.0) || !(initial_hypers->base_precision > 0.0))) {
    err << "precisions must be positive";
  } else {
    return;
  }
  throw std::invalid_argument(err.str());
}

ModelParams ChainConfig::initial_params() const {
  return {mass.value, discount.value, prob.value, parameterization_of(variant)};
}

namespace {

void require_finite(const Points& data) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw std::invalid_argument("data must hold at least one point of dimension >= 1");
  }
  if (!data.allFinite()) throw std::invalid_argument("data contain a non-finite value");
}

void remove_cluster(MixtureState& s, int k) {
  const auto idx = static_cast<std::size_t>(k);
  s.counts.erase(s.counts.begin() + k);
  s.sums.erase(s.sums.begin() + static_cast<std::ptrdiff_t>(idx));
  s.atoms.erase(s.atoms.begin() + static_cast<std::ptrdiff_t>(idx));
  for (int& z : s.assignments) {
    if (z > k) --z;
  }
}

}  // namespace

MixtureState initial_state(const Points& data, const ChainConfig& config) {
  require_finite(data);
  const auto m = data.rows();
  const auto dim = data.cols();
  MixtureState s;
  s.params = config.initial_params();
  s.assignments.assign(static_cast<std::size_t>(m), 0);
  s.counts = {static_cast<int>(m)};
  const Eigen::VectorXd total = data.colwise().sum().transpose();
  const Eigen::VectorXd mean = total / static_cast<double>(m);
  s.sums = {total};
  s.atoms = {mean};
  if (config.initial_hypers) {
    const Hypers& h = *config.initial_hypers;
    if (h.base_mean.size() != dim) {
      throw std::invalid_argument("initial base_mean has the wrong dimension");
    }
    s.precision = h.precision;
    s.base_mean = h.base_mean;
    s.base_precision = h.base_precision;
  } else {
    const double var =
        (data.rowwise() - mean.transpose()).squaredNorm() / static_cast<double>(m * dim);
    const double phi = var > 0.0 ? 1.0 / var : 1.0;
    s.precision = phi;
    s.base_mean = mean;
    s.base_precision = phi;
  }
  return s;
}

void check_consistency(const MixtureState& s, const Points& data) {
  auto fail = [](const std::string& what) { throw std::logic_error("inconsistent state: " + what); };
  if (data.rows() != s.size()) fail("assignment count differs from data size");
  const int l = s.num_clusters();
  if (static_cast<int>(s.sums.size()) != l || static_cast<int>(s.atoms.size()) != l) {
    fail("sums/atoms do not match the number of clusters");
  }
  if (!(s.precision > 0.0) || !(s.base_precision > 0.0)) fail("non-positive precision");
  if (s.base_mean.size() != data.cols()) fail("base_mean dimension");
  std::vector<int> counts(static_cast<std::size_t>(l), 0);
  std::vector<Eigen::VectorXd> sums(static_cast<std::size_t>(l),
                                    Eigen::VectorXd::Zero(data.cols()));
  int next = 0;
  for (int i = 0; i < s.size(); ++i) {
    const int z = s.assignments[static_cast<std::size_t>(i)];
    if (z < 0 || z >= l) fail("label out of range");
    if (z > next) fail("labels not in order of first appearance");
    if (z == next) ++next;
    ++counts[static_cast<std::size_t>(z)];
    sums[static_cast<std::size_t>(z)] += data.row(i).transpose();
  }
  if (next != l) fail("empty cluster");
  if (counts != s.counts) fail("cluster counts");
  for (int k = 0; k < l; ++k) {
    if (sums[static_cast<std::size_t>(k)] != s.sums[static_cast<std::size_t>(k)]) {
      fail("cluster sums");
    }
  }
}

void canonicalize(MixtureState& s, const Points& data) {
  const int l = s.num_clusters();
  std::vector<int> relabel(static_cast<std::size_t>(l), -1);
  int next = 0;
  for (int& z : s.assignments) {
    int& r = relabel[static_cast<std::size_t>(z)];
    if (r < 0) r = next++;
    z = r;
  }
  std::vector<int> counts(static_cast<std::size_t>(l));
  std::vector<Eigen::VectorXd> atoms(static_cast<std::size_t>(l));
  for (int k = 0; k < l; ++k) {
    const auto to = static_cast<std::size_t>(relabel[static_cast<std::size_t>(k)]);
    counts[to] = s.counts[static_cast<std::size_t>(k)];
    atoms[to] = std::move(s.atoms[static_cast<std::size_t>(k)]);
  }
  s.counts = std::move(counts);
  s.atoms = std::move(atoms);
  // Fresh sums keep incremental rounding from accumulating across sweeps.
  for (auto& sum : s.sums) sum.setZero();
  for (int i = 0; i < s.size(); ++i) {
    s.sums[static_cast<std::size_t>(s.assignments[static_cast<std::size_t>(i)])] +=
        data.row(i).transpose();
  }
}

double log_predictive(const Eigen::Ref<const Eigen::VectorXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& cluster_sum, int n,
                      double precision, const Eigen::VectorXd& base_mean,
                      double base_precision) {
  const double post = base_precision + n * precision;
  const double var = 1.0 / precision + 1.0 / post;
  const double dist2 =
      (x - (base_precision * base_mean + precision * cluster_sum) / post).squaredNorm();
  const double dim = static_cast<double>(x.size());
  return -0.5 * dim * std::log(2.0 * std::numbers::pi * var) - 0.5 * dist2 / var;
}

void assign_sweep(MixtureState& s, const Points& data, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  assign_sweep(s, data, order, rng);
}

void assign_sweep(MixtureState& s, const Points& data, std::span<const int> order,
                  Rng& rng) {
  if (data.rows() != s.size() || static_cast<int>(order.size()) != s.size()) {
    throw std::invalid_argument("assign_sweep: data, state and order sizes differ");
  }
  if (!data.allFinite()) throw std::invalid_argument("assign_sweep: non-finite data");
  const double a = s.params.discount;
  const double log_new = s.params.log_new_cluster_weight();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(data.cols());
  std::vector<double> logw;
  Eigen::VectorXd x(data.cols());
  for (int i : order) {
    x = data.row(i).transpose();
    auto& zi = s.assignments[static_cast<std::size_t>(i)];
    const auto old = static_cast<std::size_t>(zi);
    --s.counts[old];
    s.sums[old] -= x;
    if (s.counts[old] == 0) remove_cluster(s, zi);

    const std::size_t l = s.counts.size();
    logw.resize(l + 1);
    for (std::size_t k = 0; k < l; ++k) {
      logw[k] = std::log(s.counts[k] - a) +
                log_predictive(x, s.sums[k], s.counts[k], s.precision, s.base_mean,
                               s.base_precision);
    }
    logw[l] = log_new + log_predictive(x, zero, 0, s.precision, s.base_mean,
                                       s.base_precision);
    const std::size_t k = draw_log_categorical(logw, rng);
    if (k == l) {
      s.counts.push_back(1);
      s.sums.push_back(x);
      s.atoms.push_back((s.base_precision * s.base_mean + s.precision * x) /
                        (s.base_precision + s.precision));
    } else {
      ++s.counts[k];
      s.sums[k] += x;
    }
    zi = static_cast<int>(k);
  }
  canonicalize(s, data);
}

void update_atoms(MixtureState& s, Rng& rng) {
  for (std::size_t k = 0; k < s.counts.size(); ++k) {
    const double post = s.base_precision + s.counts[k] * s.precision;
    const double sd = 1.0 / std::sqrt(post);
    Eigen::VectorXd& mu = s.atoms[k];
    mu = (s.base_precision * s.base_mean + s.precision * s.sums[k]) / post;
    for (Eigen::Index d = 0; d < mu.size(); ++d) mu[d] += sd * draw_normal(0.0, 1.0, rng);
  }
}

void update_hypers(MixtureState& s, const Points& data, const Priors& priors, Rng& rng) {
  const double m = static_cast<double>(s.size());
  const double l = static_cast<double>(s.num_clusters());
  const double dim = static_cast<double>(data.cols());

  double sse = 0.0;
  for (int i = 0; i < s.size(); ++i) {
    sse += (data.row(i).transpose() -
            s.atoms[static_cast<std::size_t>(s.assignments[static_cast<std::size_t>(i)])])
               .squaredNorm();
  }
  s.precision = draw_gamma(priors.precision_shape + 0.5 * m * dim,
                           priors.precision_rate + 0.5 * sse, rng);

  Eigen::VectorXd atom_sum = Eigen::VectorXd::Zero(s.base_mean.size());
  for (const auto& mu : s.atoms) atom_sum += mu;
  const double post = priors.base_mean_precision + l * s.base_precision;
  const double sd = 1.0 / std::sqrt(post);
  for (Eigen::Index d = 0; d < s.base_mean.size(); ++d) {
    s.base_mean[d] = draw_normal(s.base_precision * atom_sum[d] / post, sd, rng);
  }

  double spread = 0.0;
  for (const auto& mu : s.atoms) spread += (mu - s.base_mean).squaredNorm();
  s.base_precision = draw_gamma(priors.base_precision_shape + 0.5 * l * dim,
                                priors.base_precision_rate + 0.5 * spread, rng);
}

double mass_conditional_rate(const ModelParams& params, const Priors& priors) {
  return priors.mass_rate +
         std::exp(log_rate_factor(params.parameterization, params.discount, params.prob));
}

void update_mass(MixtureState& s, const Priors& priors, Rng& rng) {
  s.params.mass = draw_gamma(priors.mass_shape + s.num_clusters(),
                             mass_conditional_rate(s.params, priors), rng);
}

namespace {
// Above this many entries the log-gamma-ratio table is computed on demand.
constexpr std::size_t kMaxTableEntries = 20'000'000;
}  // namespace

DiscountGrid::DiscountGrid(int grid_points, int max_size, Variant variant)
    : max_size_(max_size) {
  if (grid_points < 1) throw std::invalid_argument("DiscountGrid: grid_points < 1");
  if (max_size < 1) throw std::invalid_argument("DiscountGrid: max_size < 1");
  const double denom = static_cast<double>(grid_points) + 1.0;
  for (int g = 1; g <= grid_points; ++g) {
    const double a = 2.0 - denom / g;
    if (variant == Variant::NrmiAux && a < 0.0) continue;
    values_.push_back(a);
  }
  const auto cols = static_cast<std::size_t>(max_size);
  if (values_.size() * cols > kMaxTableEntries) return;
  table_.resize(values_.size() * cols);
  for (std::size_t g = 0; g < values_.size(); ++g) {
    double acc = 0.0;
    for (std::size_t s = 0; s < cols; ++s) {
      table_[g * cols + s] = acc;
      acc += std::log(static_cast<double>(s + 1) - values_[g]);
    }
  }
}

double DiscountGrid::log_gamma_ratio(std::size_t g, int s) const {
  if (s < 1 || s > max_size_) throw std::out_of_range("DiscountGrid: size outside the table");
  if (table_.empty()) return gnbp::log_gamma_ratio(s, values_[g]);
  return table_[g * static_cast<std::size_t>(max_size_) + static_cast<std::size_t>(s - 1)];
}

std::vector<double> discount_log_weights(std::span<const int> sizes,
                                         const ModelParams& params,
                                         const DiscountGrid& grid) {
  std::map<int, int> multiplicity;
  int m = 0;
  for (int n : sizes) {
    ++multiplicity[n];
    m += n;
  }
  const double l = static_cast<double>(sizes.size());
  const double p = guard_prob(params.prob).value;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const bool original = params.parameterization == Parameterization::Original;

  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double a = grid.values()[g];
    double w = 0.0;
    for (const auto& [n, count] : multiplicity) w += count * grid.log_gamma_ratio(g, n);
    if (original) {
      w += -params.mass * std::exp(log_original_rate_factor_from_logs(a, log_p, log_q)) +
           (m - a * l) * log_p;
    } else {
      w += -params.mass * std::exp(log_reparam_rate_factor_from_log_q(a, log_q)) - a * l * log_q;
    }
    out[g] = std::isnan(w) ? -INFINITY : w;
  }
  return out;
}

void update_discount(MixtureState& s, const DiscountGrid& grid, Rng& rng) {
  if (grid.size() < 2) return;
  const auto logw = discount_log_weights(s.counts, s.params, grid);
  s.params.discount = grid.values()[draw_log_categorical(logw, rng)];
}

std::vector<double> prob_grid(int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("prob_grid: grid_points < 1");
  std::vector<double> out(static_cast<std::size_t>(grid_points));
  const double denom = static_cast<double>(grid_points) + 1.0;
  for (int g = 1; g <= grid_points; ++g) out[static_cast<std::size_t>(g - 1)] = g / denom;
  return out;
}

double prob_log_conditional(double p, int m, int l, const ModelParams& params,
                            Variant variant) {
  const double a = params.discount;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  double w = 0.0;
  switch (variant) {
    case Variant::Gnbp:
      w = -params.mass * std::exp(log_original_rate_factor_from_logs(a, log_p, log_q)) +
          (m - a * l) * log_p;
      break;
    case Variant::ReparamGnbp:
      w = -params.mass * std::exp(log_reparam_rate_factor_from_log_q(a, log_q)) + m * log_p -
          a * l * log_q;
      break;
    case Variant::NrmiAux:
      w = -params.mass * std::exp(log_reparam_rate_factor_from_log_q(a, log_q)) +
          (m - 1) * log_p + (1.0 - a * l) * log_q;
      break;
  }
  return std::isnan(w) ? -INFINITY : w;
}

void update_prob(MixtureState& s, Variant variant, int grid_points, const Priors& priors,
                 Rng& rng) {
  const double a = s.params.discount;
  const int m = s.size();
  const int l = s.num_clusters();
  if (is_zero_discount(a)) {
    const double p = variant == Variant::NrmiAux
                         ? draw_beta(m, s.params.mass + 2.0, rng)
                         : draw_beta(priors.prob_alpha + m, priors.prob_beta + s.params.mass, rng);
    s.params.prob = guard_prob(p).value;
    return;
  }
  if (variant == Variant::NrmiAux && a < 0.0) {
    throw std::invalid_argument("update_prob: the nrmi variant does not allow a < 0");
  }
  const auto grid = prob_grid(grid_points);
  std::vector<double> logw(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    logw[g] = prob_log_conditional(grid[g], m, l, s.params, variant);
  }
  s.params.prob = grid[draw_log_categorical(logw, rng)];
}

namespace {

// Prediction-rule Gibbs over bare labels. Labels stay compact (0..l-1) but
// not necessarily in order of appearance.
struct PriorBook {
  std::vector<int> z;
  std::vector<int> counts;
  std::vector<double> weights;

  explicit PriorBook(const Partition& part)
      : z(part.assignments()), counts(part.sizes()) {}

  void sweep(const ModelParams& params, std::span<const int> order, Rng& rng) {
    const double a = params.discount;
    const double w_new = params.new_cluster_weight();
    for (int i : order) {
      int& zi = z[static_cast<std::size_t>(i)];
      if (--counts[static_cast<std::size_t>(zi)] == 0) {
        const int k = zi;
        counts.erase(counts.begin() + k);
        for (int& label : z) {
          if (label > k) --label;
        }
      }
      const std::size_t l = counts.size();
      weights.resize(l + 1);
      for (std::size_t k = 0; k < l; ++k) weights[k] = counts[k] - a;
      weights[l] = w_new;
      const std::size_t k = draw_categorical(weights, rng);
      if (k == l) {
        counts.push_back(1);
      } else {
        ++counts[k];
      }
      zi = static_cast<int>(k);
    }
  }
};

std::vector<int> identity_order(int m) {
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace

Partition prior_partition_sweep(const Partition& part, const ModelParams& params,
                                Rng& rng) {
  const auto order = identity_order(part.size());
  return prior_partition_sweep(part, params, order, rng);
}

Partition prior_partition_sweep(const Partition& part, const ModelParams& params,
                                std::span<const int> order, Rng& rng) {
  if (part.size() < 1) throw std::invalid_argument("prior_partition_sweep: m < 1");
  if (static_cast<int>(order.size()) != part.size()) {
    throw std::invalid_argument("prior_partition_sweep: order size differs from m");
  }
  params.validate();
  PriorBook book(part);
  book.sweep(params, order, rng);
  return Partition::from_labels(book.z);
}

namespace {

TraceRecord make_record(int iteration, const MixtureState& s, bool with_states) {
  TraceRecord r;
  r.iteration = iteration;
  r.sample_size = s.size();
  r.num_clusters = s.num_clusters();
  r.unit_clusters = static_cast<int>(std::count(s.counts.begin(), s.counts.end(), 1));
  r.mass = s.params.mass;
  r.discount = s.params.discount;
  r.prob = s.params.prob;
  r.precision = s.precision;
  r.base_mean.assign(s.base_mean.data(), s.base_mean.data() + s.base_mean.size());
  r.base_precision = s.base_precision;
  r.log_ecpf = log_ecpf(s.counts, s.params);
  if (with_states) {
    r.sizes = s.counts;
    r.atoms.reserve(s.atoms.size());
    for (const auto& mu : s.atoms) r.atoms.emplace_back(mu.data(), mu.data() + mu.size());
  }
  return r;
}

}  // namespace

Trace run_chain(const Points& data, const ChainConfig& config) {
  config.validate();
  require_finite(data);
  Trace trace;
  trace.config = config;
  trace.dimension = static_cast<int>(data.cols());
  trace.records.reserve(static_cast<std::size_t>(config.iterations - config.burn_in));

  Rng rng(config.seed);
  MixtureState state = initial_state(data, config);
  std::optional<DiscountGrid> grid;
  if (config.discount.learn) {
    grid.emplace(config.grid_points, static_cast<int>(data.rows()), config.variant);
  }
  for (int it = 0; it < config.iterations; ++it) {
    assign_sweep(state, data, rng);
    update_atoms(state, rng);
    if (config.learn_hypers) update_hypers(state, data, config.priors, rng);
    if (config.mass.learn) update_mass(state, config.priors, rng);
    if (grid) update_discount(state, *grid, rng);
    if (config.prob.learn) {
      update_prob(state, config.variant, config.grid_points, config.priors, rng);
    }
    if (it >= config.burn_in) {
      trace.records.push_back(make_record(it + 1, state, config.record_states));
    }
  }
  return trace;
}

Trace run_prior_chain(const ModelParams& params, const PriorChainConfig& config) {
  params.validate();
  const int m = config.m;
  const int j = config.subsample == 0 ? m : config.subsample;
  if (m < 1) throw std::invalid_argument("run_prior_chain: m must be >= 1");
  if (j < 1 || j > m) throw std::invalid_argument("run_prior_chain: need 1 <= j <= m");
  if (config.iterations < 1 || config.burn_in < 0 || config.burn_in >= config.iterations) {
    throw std::invalid_argument("run_prior_chain: need 0 <= burn_in < iterations");
  }

  Trace trace;
  trace.kind = "prior";
  trace.config.iterations = config.iterations;
  trace.config.burn_in = config.burn_in;
  trace.config.seed = config.seed;
  trace.config.variant = params.parameterization == Parameterization::Original
                             ? Variant::Gnbp
                             : Variant::ReparamGnbp;
  trace.config.discount = Setting::fixed(params.discount);
  trace.config.prob = Setting::fixed(params.prob);
  trace.config.mass = Setting::fixed(params.mass);
  trace.config.learn_hypers = false;
  trace.records.reserve(static_cast<std::size_t>(config.iterations - config.burn_in));

  Rng rng(config.seed);
  std::uniform_int_distribution<int> pick(0, m - 1);
  std::vector<int> labels(static_cast<std::size_t>(m));
  for (int& z : labels) z = pick(rng);
  PriorBook book(Partition::from_labels(labels));
  const auto order = identity_order(m);
  std::vector<int> first_seen;

  for (int it = 0; it < config.iterations; ++it) {
    book.sweep(params, order, rng);
    if (it < config.burn_in) continue;
    TraceRecord r;
    r.iteration = it + 1;
    r.sample_size = m;
    r.num_clusters = static_cast<int>(book.counts.size());
    r.unit_clusters = static_cast<int>(std::count(book.counts.begin(), book.counts.end(), 1));
    // Distinct labels among the first j elements; also yields the
    // order-of-appearance ranking of the clusters.
    first_seen.assign(book.counts.size(), -1);
    int seen = 0;
    for (int i = 0; i < m; ++i) {
      int& f = first_seen[static_cast<std::size_t>(book.z[static_cast<std::size_t>(i)])];
      if (f < 0) {
        f = seen++;
        if (i < j) r.subsample_clusters = seen;
      }
    }
    r.mass = params.mass;
    r.discount = params.discount;
    r.prob = params.prob;
    r.log_ecpf = log_ecpf(book.counts, params);
    r.sizes.assign(book.counts.size(), 0);
    for (std::size_t k = 0; k < book.counts.size(); ++k) {
      r.sizes[static_cast<std::size_t>(first_seen[k])] = book.counts[k];
    }
    trace.records.push_back(std::move(r));
  }
  return trace;
}

std::vector<double> predictive_density(const Trace& trace, std::span<const double> grid) {
  if (trace.records.empty()) throw std::invalid_argument("predictive_density: empty trace");
  if (trace.dimension != 1) {
    throw std::invalid_argument("predictive_density: needs a one-dimensional posterior trace");
  }
  const auto param = parameterization_of(trace.config.variant);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto normal_pdf = [inv_sqrt_2pi](double x, double mean, double var) {
    const double d = x - mean;
    return inv_sqrt_2pi / std::sqrt(var) * std::exp(-0.5 * d * d / var);
  };

  std::vector<double> density(grid.size(), 0.0);
  for (const auto& r : trace.records) {
    if (static_cast<int>(r.sizes.size()) != r.num_clusters ||
        r.atoms.size() != r.sizes.size() || r.base_mean.size() != 1) {
      throw std::invalid_argument("predictive_density: trace lacks recorded states");
    }
    const ModelParams params{r.mass, r.discount, r.prob, param};
    const double a = r.discount;
    const double w = params.new_cluster_weight();
    const double norm = r.sample_size - a * r.num_clusters + w;
    const double kernel_var = 1.0 / r.precision;
    const double base_var = 1.0 / r.base_precision + kernel_var;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double acc = w * normal_pdf(grid[g], r.base_mean[0], base_var);
      for (std::size_t k = 0; k < r.sizes.size(); ++k) {
        acc += (r.sizes[k] - a) * normal_pdf(grid[g], r.atoms[k][0], kernel_var);
      }
      density[g] += acc / norm;
    }
  }
  for (double& d : density) d /= static_cast<double>(trace.records.size());
  return density;
}

}  // namespace gnbp
