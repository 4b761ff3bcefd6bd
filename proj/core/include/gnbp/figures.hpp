#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gnbp/gibbs.hpp"
#include "gnbp/io.hpp"
#include "gnbp/params.hpp"

namespace gnbp {

// Tabular data behind each figure. Column schemas:
//   fig1          m, l, compound_poisson, gcrp        (joint P(l, m) two ways)
//   fig2          l, one f_L(l | m) column per a       (one table per model)
//   fig3          n_k, one TNB(a, p) column per a     (one table per model)
//   fig4          l_j, "a=<a>,m=<m>" frequency columns (one table per model)
//   fig5          variant, learned, a, mean_l, unit_ratio, mean_size, non_unit
//   fig5_discount variant, a, frequency                (learned-a histograms)
//   fig6 / fig7   sizes: n_k | clusters: l | non_unit: count | density: x,
//                 then one column per run ("a=<a>" or "a=learned")

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class TableFormat { Csv, Json };

/// .csv -> Csv, .json -> Json.
std::optional<TableFormat> table_format_for(const std::filesystem::path& path);

/// CSV: header line then rows. JSON: {"columns": [...], "rows": [[...]]}.
/// A table without rows gives a header-only file.
void write_table(const Table& table, std::ostream& out, TableFormat format);
/// Throws DataError if the path is unwritable or has an unknown extension.
void export_figure_data(const Table& table, const std::filesystem::path& path);

inline constexpr std::array kFig2Discounts{-4.0, -1.0, 0.0, 0.5, 0.9};
inline constexpr std::array kFig3Discounts{-4.0, -2.0, 0.0, 0.25, 0.5};
inline constexpr std::array kFig4Discounts{-4.0, -1.0, 0.0, 0.5, 0.9};
inline constexpr std::array kFig5Discounts{-4.0, -2.0, -0.5, 0.0, 0.25, 0.5, 0.9, 0.99};
inline constexpr std::array kFig6Discounts{-4.0, 0.0, 0.9};

/// Column label for a discount value, e.g. "a=-0.5".
std::string discount_label(double a);

/// Joint P(l, m) for m <= max_m from Pois(cluster_rate) clusters with iid
/// TNB sizes, next to gNB f_M(m) times f_L(l | m).
Table fig1_table(const ModelParams& params, int max_m);

/// f_L(l | m), l = 0..m, with p solved so that E[m] = m.
Table fig2_table(Parameterization param, int m, double mass,
                 std::span<const double> discounts);

/// TNB(a, p) PMF for n_k = 1..max_size with p solved from E[m].
Table fig3_table(Parameterization param, double expected_m, double mass,
                 std::span<const double> discounts, int max_size);

struct Fig4Config {
  double mass = 1.0;
  double prob = 0.9;
  int m_small = 20;
  int m_large = 100;
  int subsample = 20;
  int iterations = 15000;
  int burn_in = 5000;
  std::uint64_t seed = 0;
};

/// Empirical distribution of l among the first j elements from prior
/// prediction-rule chains at m_small and m_large.
Table fig4_table(Parameterization param, std::span<const double> discounts,
                 const Fig4Config& config);

/// One posterior run of a sweep over discounts.
struct SweepRun {
  Variant variant = Variant::Gnbp;
  bool learned = false;
  double discount = 0.0;  // fixed value, or the posterior mean when learned
  Summary summary;
  std::vector<double> density;  // on SweepConfig::density_grid
};

struct SweepConfig {
  std::vector<Variant> variants{Variant::Gnbp, Variant::ReparamGnbp};
  std::vector<double> discounts{kFig5Discounts.begin(), kFig5Discounts.end()};
  bool include_learned = true;
  /// Iterations, burn-in, seed, grid and priors; the discount setting is
  /// overridden per run. Run r uses seed base.seed + r.
  ChainConfig base;
  /// Predictive density grid (one-dimensional data only; may be empty).
  std::vector<double> density_grid;
};

/// Evenly spaced grid covering the data range plus 10% on each side.
std::vector<double> default_density_grid(const Points& data, int points = 401);

std::vector<SweepRun> run_sweep(const Points& data, const SweepConfig& config);

Table fig5_table(std::span<const SweepRun> runs);
Table fig5_discount_table(std::span<const SweepRun> runs);

struct PosteriorTables {
  Table sizes;
  Table clusters;
  Table non_unit;
  Table density;
};

/// Posterior cluster-size, cluster-number, non-unit-count distributions and
/// predictive densities for the runs of one variant.
PosteriorTables posterior_tables(std::span<const SweepRun> runs, Variant variant,
                                 std::span<const double> density_grid);

}  // namespace gnbp
