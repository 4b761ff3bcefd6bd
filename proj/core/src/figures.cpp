#include "gnbp/figures.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "gnbp/dist.hpp"
#include "gnbp/process.hpp"
#include "gnbp/special.hpp"

namespace gnbp {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("Table::add_row: row width differs from the header");
  }
  rows.push_back(std::move(row));
}

std::optional<TableFormat> table_format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return TableFormat::Csv;
  if (ext == ".json") return TableFormat::Json;
  return std::nullopt;
}

void write_table(const Table& table, std::ostream& out, TableFormat format) {
  if (format == TableFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& cell : row) {
        std::visit([&r](const auto& v) { r.push_back(v); }, cell);
      }
      rows.push_back(std::move(r));
    }
    out << nlohmann::json{{"columns", table.columns}, {"rows", rows}}.dump() << '\n';
    return;
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (const auto* d = std::get_if<double>(&row[c])) {
        out << format_double(*d);
      } else {
        out << std::get<std::string>(row[c]);
      }
    }
    out << '\n';
  }
}

void export_figure_data(const Table& table, const std::filesystem::path& path) {
  const auto format = table_format_for(path);
  if (!format) throw DataError("figure path must end in .csv or .json: " + path.string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_table(table, out, *format);
  if (!out) throw DataError("failed writing " + path.string());
}

std::string discount_label(double a) { return "a=" + format_double(a); }

Table fig1_table(const ModelParams& params, int max_m) {
  params.validate();
  if (max_m < 0) throw std::invalid_argument("fig1_table: max_m < 0");
  const auto original = params.to_original();
  const double a = original.discount;
  const double p = guard_prob(original.prob).value;
  const double rate = original.cluster_rate();
  const auto n = static_cast<std::size_t>(max_m);

  std::vector<double> tnb(n + 1, 0.0);
  for (std::size_t u = 1; u <= n; ++u) tnb[u] = std::exp(tnb_log_pmf(static_cast<long>(u), a, p));
  // conv[l][m]: probability that l iid TNB sizes sum to m.
  std::vector<std::vector<double>> conv(n + 1, std::vector<double>(n + 1, 0.0));
  conv[0][0] = 1.0;
  for (std::size_t l = 1; l <= n; ++l) {
    for (std::size_t m = l; m <= n; ++m) {
      double acc = 0.0;
      for (std::size_t u = 1; u <= m - (l - 1); ++u) acc += conv[l - 1][m - u] * tnb[u];
      conv[l][m] = acc;
    }
  }

  const auto triangle = StirlingTriangle::build(max_m, a);
  Table t{{"m", "l", "compound_poisson", "gcrp"}, {}};
  for (int m = 0; m <= max_m; ++m) {
    const double f_m = std::exp(gnb_log_pmf(m, original, triangle));
    const auto f_l = cluster_number_pmf(m, original, triangle);
    for (int l = 0; l <= m; ++l) {
      const double pois =
          std::exp(-rate + l * std::log(rate) - log_factorial(l));
      t.add_row({double(m), double(l),
                 pois * conv[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)],
                 f_m * f_l[static_cast<std::size_t>(l)]});
    }
  }
  return t;
}

Table fig2_table(Parameterization param, int m, double mass,
                 std::span<const double> discounts) {
  if (m < 1) throw std::invalid_argument("fig2_table: m < 1");
  Table t;
  t.columns.push_back("l");
  std::vector<std::vector<double>> columns;
  for (double a : discounts) {
    t.columns.push_back(discount_label(a));
    const double p = guard_prob(solve_prob(m, mass, a, param)).value;
    const ModelParams params{mass, a, p, param};
    columns.push_back(cluster_number_pmf(m, params, StirlingTriangle::build(m, a)));
  }
  for (int l = 0; l <= m; ++l) {
    std::vector<Cell> row{double(l)};
    for (const auto& col : columns) row.emplace_back(col[static_cast<std::size_t>(l)]);
    t.add_row(std::move(row));
  }
  return t;
}

Table fig3_table(Parameterization param, double expected_m, double mass,
                 std::span<const double> discounts, int max_size) {
  if (max_size < 1) throw std::invalid_argument("fig3_table: max_size < 1");
  Table t;
  t.columns.push_back("n_k");
  std::vector<double> probs;
  for (double a : discounts) {
    t.columns.push_back(discount_label(a));
    probs.push_back(guard_prob(solve_prob(expected_m, mass, a, param)).value);
  }
  for (int u = 1; u <= max_size; ++u) {
    std::vector<Cell> row{double(u)};
    for (std::size_t i = 0; i < discounts.size(); ++i) {
      row.emplace_back(std::exp(tnb_log_pmf(u, discounts[i], probs[i])));
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table fig4_table(Parameterization param, std::span<const double> discounts,
                 const Fig4Config& config) {
  Table t;
  t.columns.push_back("l_j");
  std::vector<std::map<int, double>> columns;
  std::uint64_t seed = config.seed;
  for (double a : discounts) {
    const ModelParams params{config.mass, a, config.prob, param};
    for (int m : {config.m_small, config.m_large}) {
      t.columns.push_back(discount_label(a) + ",m=" + std::to_string(m));
      PriorChainConfig chain{m, config.subsample, config.iterations, config.burn_in, seed++};
      columns.push_back(summarize(run_prior_chain(params, chain)).subsample_histogram);
    }
  }
  for (int l = 1; l <= config.subsample; ++l) {
    std::vector<Cell> row{double(l)};
    for (const auto& col : columns) {
      const auto it = col.find(l);
      row.emplace_back(it == col.end() ? 0.0 : it->second);
    }
    t.add_row(std::move(row));
  }
  return t;
}

std::vector<double> default_density_grid(const Points& data, int points) {
  if (data.size() == 0 || points < 2) {
    throw std::invalid_argument("default_density_grid: need data and >= 2 points");
  }
  const double lo = data.minCoeff();
  const double hi = data.maxCoeff();
  const double pad = hi > lo ? 0.1 * (hi - lo) : 1.0;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = lo - pad + (hi - lo + 2 * pad) * i / (points - 1);
  }
  return grid;
}

std::vector<SweepRun> run_sweep(const Points& data, const SweepConfig& config) {
  std::vector<SweepRun> runs;
  std::uint64_t seed = config.base.seed;
  auto run_one = [&](Variant variant, Setting discount) {
    ChainConfig chain = config.base;
    chain.variant = variant;
    chain.discount = discount;
    chain.seed = seed++;
    chain.record_states = !config.density_grid.empty();
    const Trace trace = run_chain(data, chain);
    SweepRun run;
    run.variant = variant;
    run.learned = discount.learn;
    run.summary = summarize(trace);
    run.discount = discount.learn ? run.summary.mean_discount : discount.value;
    if (!config.density_grid.empty()) {
      run.density = predictive_density(trace, config.density_grid);
    }
    runs.push_back(std::move(run));
  };
  for (Variant v : config.variants) {
    for (double a : config.discounts) {
      if (v == Variant::NrmiAux && a < 0.0) continue;
      run_one(v, Setting::fixed(a));
    }
    if (config.include_learned) run_one(v, Setting::learned(0.0));
  }
  return runs;
}

Table fig5_table(std::span<const SweepRun> runs) {
  Table t{{"variant", "learned", "a", "mean_l", "unit_ratio", "mean_size", "non_unit"}, {}};
  for (const auto& r : runs) {
    t.add_row({std::string(to_string(r.variant)), r.learned ? 1.0 : 0.0, r.discount,
               r.summary.posterior_mean_l, r.summary.unit_size_ratio,
               r.summary.mean_cluster_size, r.summary.non_unit_clusters});
  }
  return t;
}

Table fig5_discount_table(std::span<const SweepRun> runs) {
  Table t{{"variant", "a", "frequency"}, {}};
  for (const auto& r : runs) {
    if (!r.learned) continue;
    const auto& h = r.summary.discount;
    for (std::size_t b = 0; b < h.freq.size(); ++b) {
      t.add_row({std::string(to_string(r.variant)), h.bin_center(b), h.freq[b]});
    }
  }
  return t;
}

namespace {

Table histogram_table(std::string key, const std::vector<const SweepRun*>& runs,
                      const std::map<int, double> Summary::*member) {
  Table t;
  t.columns.push_back(std::move(key));
  int lo = 0;
  int hi = 0;
  bool any = false;
  for (const auto* r : runs) {
    t.columns.push_back(r->learned ? "a=learned" : discount_label(r->discount));
    const auto& h = r->summary.*member;
    if (h.empty()) continue;
    lo = any ? std::min(lo, h.begin()->first) : h.begin()->first;
    hi = any ? std::max(hi, h.rbegin()->first) : h.rbegin()->first;
    any = true;
  }
  if (!any) return t;
  for (int k = lo; k <= hi; ++k) {
    std::vector<Cell> row{double(k)};
    for (const auto* r : runs) {
      const auto& h = r->summary.*member;
      const auto it = h.find(k);
      row.emplace_back(it == h.end() ? 0.0 : it->second);
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace

PosteriorTables posterior_tables(std::span<const SweepRun> runs, Variant variant,
                                 std::span<const double> density_grid) {
  std::vector<const SweepRun*> mine;
  for (const auto& r : runs) {
    if (r.variant == variant) mine.push_back(&r);
  }
  PosteriorTables out;
  out.sizes = histogram_table("n_k", mine, &Summary::size_histogram);
  out.clusters = histogram_table("l", mine, &Summary::l_histogram);
  out.non_unit = histogram_table("count", mine, &Summary::non_unit_histogram);
  out.density.columns.push_back("x");
  for (const auto* r : mine) {
    out.density.columns.push_back(r->learned ? "a=learned" : discount_label(r->discount));
    if (r->density.size() != density_grid.size()) {
      throw std::invalid_argument("posterior_tables: density grid mismatch");
    }
  }
  for (std::size_t g = 0; g < density_grid.size(); ++g) {
    std::vector<Cell> row{density_grid[g]};
    for (const auto* r : mine) row.emplace_back(r->density[g]);
    out.density.add_row(std::move(row));
  }
  return out;
}

}  // namespace gnbp
