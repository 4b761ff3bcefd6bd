#include "cli.hpp"

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "gnbp/dist.hpp"
#include "gnbp/figures.hpp"
#include "gnbp/gibbs.hpp"
#include "gnbp/io.hpp"
#include "gnbp/process.hpp"
#include "gnbp/special.hpp"

namespace gnbp::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Variant variant_from(const std::string& text) {
  const auto v = parse_variant(text);
  if (!v) throw UsageError("--variant must be gnbp, reparam or nrmi, got '" + text + "'");
  return *v;
}

Setting setting_from(const std::string& text, double start, const std::string& flag) {
  if (text == "learn") return Setting::learned(start);
  const auto v = parse_double(text);
  if (!v) throw UsageError(flag + " expects a number or 'learn', got '" + text + "'");
  return Setting::fixed(*v);
}

// Either --p or --expected-m (solved to p), never both.
struct ProbFlags {
  double p = 0.0;
  double expected_m = 0.0;
  CLI::Option* p_opt = nullptr;
  CLI::Option* expected_opt = nullptr;

  void add(CLI::App* cmd) {
    p_opt = cmd->add_option("--p", p, "Probability parameter p in (0, 1)");
    expected_opt = cmd->add_option("--expected-m", expected_m,
                                   "Solve p so that the expected sample size is this value");
    p_opt->excludes(expected_opt);
  }

  double resolve(double mass, double a, Parameterization param, std::ostream& err) const {
    double value = 0.0;
    if (p_opt->count() > 0) {
      value = p;
    } else if (expected_opt->count() > 0) {
      if (!(expected_m > 0.0)) throw UsageError("--expected-m must be positive");
      if (!(mass > 0.0)) throw UsageError("--mass must be positive");
      if (!(a < 1.0)) throw UsageError("--a must be < 1");
      value = solve_prob(expected_m, mass, a, param);
    } else {
      throw UsageError("one of --p or --expected-m is required");
    }
    if (!(value > 0.0 && value <= 1.0) && expected_opt->count() == 0) {
      throw UsageError("--p must lie in (0, 1)");
    }
    const auto guarded = guard_prob(value);
    if (guarded.clamped) {
      err << "warning: p = " << format_double(value) << " clamped to "
          << format_double(guarded.value) << '\n';
    }
    return guarded.value;
  }
};

ModelParams model_params(double mass, double a, double p, const std::string& variant) {
  ModelParams params{mass, a, p, parameterization_of(variant_from(variant))};
  params.validate();
  return params;
}

void print_params(std::ostream& out, const ModelParams& params) {
  out << "# mass = " << format_double(params.mass) << '\n'
      << "# a = " << format_double(params.discount) << '\n'
      << "# p = " << format_double(params.prob) << '\n'
      << "# parameterization = " << to_string(params.parameterization) << '\n';
}

// path unchanged for a single chain, else stem_chain<i>.ext.
fs::path chain_path(const fs::path& path, int index, int chains) {
  if (chains == 1) return path;
  fs::path out = path;
  out.replace_filename(path.stem().string() + "_chain" + std::to_string(index) +
                       path.extension().string());
  return out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path.string());
  return file;
}

template <class Result, class Fn>
std::vector<Result> run_chains(int chains, Fn fn) {
  std::vector<Result> results(static_cast<std::size_t>(chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chains));
  std::vector<std::thread> workers;
  for (int c = 0; c < chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        results[static_cast<std::size_t>(c)] = fn(c);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

// ---- simulate-prior ------------------------------------------------------

struct SimulateFlags {
  double mass = 1.0;
  double a = 0.0;
  ProbFlags prob;
  long n_draws = 1000;
  std::string variant = "gnbp";
  std::uint64_t seed = 0;
  std::string out;
};

int simulate_prior(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
  if (f.n_draws < 1) throw UsageError("--n-draws must be >= 1");
  const auto param = parameterization_of(variant_from(f.variant));
  const double p = f.prob.resolve(f.mass, f.a, param, err);
  const auto params = model_params(f.mass, f.a, p, f.variant);

  std::ofstream file;
  if (!f.out.empty()) {
    file = open_output(f.out);
    file << "draw,l,m,sizes\n";
  }
  out << "# simulate-prior\n# seed = " << f.seed << '\n';
  print_params(out, params);
  Rng rng(f.seed);
  double sum_l = 0.0;
  double sum_m = 0.0;
  for (long d = 0; d < f.n_draws; ++d) {
    const auto draw = simulate_prior(params, rng);
    sum_l += static_cast<double>(draw.clusters());
    sum_m += static_cast<double>(draw.sample_size());
    if (file.is_open()) {
      file << d << ',' << draw.clusters() << ',' << draw.sample_size() << ',';
      for (std::size_t k = 0; k < draw.sizes.size(); ++k) {
        file << (k ? ";" : "") << draw.sizes[k];
      }
      file << '\n';
    }
  }
  const double n = static_cast<double>(f.n_draws);
  out << "draws = " << f.n_draws << '\n'
      << "mean_l = " << format_double(sum_l / n) << '\n'
      << "mean_m = " << format_double(sum_m / n) << '\n'
      << "expected_l = " << format_double(params.cluster_rate()) << '\n'
      << "expected_m = " << format_double(gnb_moments(params).mean) << '\n';
  return kOk;
}

// ---- pmf -----------------------------------------------------------------

struct PmfFlags {
  std::string kind = "cluster-number";
  int m = 0;
  int max = 100;
  double mass = 1.0;
  double a = 0.0;
  ProbFlags prob;
  std::string variant = "gnbp";
  std::string out;
};

int pmf(const PmfFlags& f, std::ostream& out, std::ostream& err) {
  if (f.kind != "cluster-number" && f.kind != "tnb" && f.kind != "gnb") {
    throw UsageError("--kind must be cluster-number, tnb or gnb");
  }
  if (f.kind == "cluster-number" && f.m < 1) throw UsageError("--m must be >= 1");
  if (f.kind != "cluster-number" && f.max < 1) throw UsageError("--max must be >= 1");
  const auto param = parameterization_of(variant_from(f.variant));
  const double p = f.prob.resolve(f.mass, f.a, param, err);
  const auto params = model_params(f.mass, f.a, p, f.variant);

  Table table;
  if (f.kind == "cluster-number") {
    table.columns = {"l", "probability"};
    const auto values = cluster_number_pmf(f.m, params, StirlingTriangle::build(f.m, f.a));
    for (std::size_t l = 0; l < values.size(); ++l) table.add_row({double(l), values[l]});
  } else if (f.kind == "tnb") {
    table.columns = {"n_k", "probability"};
    for (int u = 1; u <= f.max; ++u) table.add_row({double(u), std::exp(tnb_log_pmf(u, f.a, p))});
  } else {
    table.columns = {"m", "probability"};
    const auto triangle = StirlingTriangle::build(f.max, f.a);
    for (int m = 0; m <= f.max; ++m) {
      table.add_row({double(m), std::exp(gnb_log_pmf(m, params, triangle))});
    }
  }
  out << "# pmf kind = " << f.kind << '\n';
  print_params(out, params);
  if (f.out.empty()) {
    write_table(table, out, TableFormat::Csv);
  } else {
    export_figure_data(table, f.out);
  }
  return kOk;
}

// ---- fit -----------------------------------------------------------------

struct FitFlags {
  std::string data;
  std::string config;
  std::string variant = "gnbp";
  std::string a = "learn";
  std::string p = "learn";
  std::string mass = "learn";
  int iterations = 15000;
  int burn_in = 5000;
  int grid_points = 9999;
  std::uint64_t seed = 0;
  int chains = 1;
  std::string out;
  std::string summary;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const { return opts.at(name)->count() > 0; }
};

ChainConfig fit_config(const FitFlags& f) {
  ChainConfig c = f.config.empty() ? ChainConfig{} : load_chain_config(f.config);
  if (f.given("--variant")) c.variant = variant_from(f.variant);
  if (f.given("--a") || f.config.empty()) c.discount = setting_from(f.a, c.discount.value, "--a");
  if (f.given("--p") || f.config.empty()) c.prob = setting_from(f.p, c.prob.value, "--p");
  if (f.given("--mass") || f.config.empty()) c.mass = setting_from(f.mass, c.mass.value, "--mass");
  if (f.given("--iterations") || f.config.empty()) c.iterations = f.iterations;
  if (f.given("--burn-in") || f.config.empty()) c.burn_in = f.burn_in;
  if (f.given("--grid-points") || f.config.empty()) c.grid_points = f.grid_points;
  if (f.given("--seed") || f.config.empty()) c.seed = f.seed;
  c.validate();
  return c;
}

void print_summary_line(std::ostream& out, int chain, const Summary& s) {
  out << "chain " << chain << ": records = " << s.records
      << ", mean_l = " << format_double(s.posterior_mean_l)
      << ", unit_ratio = " << format_double(s.unit_size_ratio)
      << ", mean_size = " << format_double(s.mean_cluster_size)
      << ", non_unit = " << format_double(s.non_unit_clusters)
      << ", mean_a = " << format_double(s.mean_discount)
      << ", mean_p = " << format_double(s.mean_prob)
      << ", mean_mass = " << format_double(s.mean_mass) << '\n';
}

int fit(const FitFlags& f, std::ostream& out, std::ostream&) {
  if (f.chains < 1) throw UsageError("--chains must be >= 1");
  if (!f.out.empty() && !trace_format_for(f.out)) {
    throw UsageError("--out must end in .csv, .jsonl or .json");
  }
  const ChainConfig config = fit_config(f);
  const Dataset data = load_dataset(f.data);

  out << "# fit\n# seed = " << config.seed << '\n'
      << "# data = " << f.data << " (" << data.size() << " points, dimension "
      << data.dimension() << ")\n";
  for (const auto& [k, v] : config_entries(config)) out << "# " << k << " = " << v << '\n';

  const auto traces = run_chains<Trace>(f.chains, [&](int c) {
    ChainConfig chain = config;
    chain.seed = config.seed + static_cast<std::uint64_t>(c);
    return run_chain(data.points, chain);
  });
  for (int c = 0; c < f.chains; ++c) {
    const Trace& trace = traces[static_cast<std::size_t>(c)];
    const Summary summary = summarize(trace);
    if (!f.out.empty()) write_trace(trace, chain_path(f.out, c, f.chains));
    if (!f.summary.empty()) {
      write_summary(summary, chain_path(f.summary, c, f.chains));
    }
    print_summary_line(out, c, summary);
  }
  return kOk;
}

// ---- prior-partitions ----------------------------------------------------

struct PriorFlags {
  int m = 0;
  int j = 0;
  double mass = 1.0;
  double a = 0.0;
  ProbFlags prob;
  std::string variant = "gnbp";
  int iterations = 15000;
  int burn_in = 5000;
  std::uint64_t seed = 0;
  int chains = 1;
  std::string out;
  std::string trace;
};

int prior_partitions(const PriorFlags& f, std::ostream& out, std::ostream& err) {
  if (f.m < 1) throw UsageError("--m must be >= 1");
  if (f.j < 0 || f.j > f.m) throw UsageError("--j must lie in [1, m]");
  if (f.chains < 1) throw UsageError("--chains must be >= 1");
  if (f.iterations < 1 || f.burn_in < 0 || f.burn_in >= f.iterations) {
    throw UsageError("need 0 <= --burn-in < --iterations");
  }
  if (!f.trace.empty() && !trace_format_for(f.trace)) {
    throw UsageError("--trace must end in .csv, .jsonl or .json");
  }
  if (!f.out.empty() && !table_format_for(f.out)) {
    throw UsageError("--out must end in .csv or .json");
  }
  const auto param = parameterization_of(variant_from(f.variant));
  const double p = f.prob.resolve(f.mass, f.a, param, err);
  const auto params = model_params(f.mass, f.a, p, f.variant);
  const int j = f.j == 0 ? f.m : f.j;

  out << "# prior-partitions\n# seed = " << f.seed << '\n'
      << "# m = " << f.m << "\n# j = " << j << '\n';
  print_params(out, params);

  const auto traces = run_chains<Trace>(f.chains, [&](int c) {
    return run_prior_chain(params, {f.m, j, f.iterations, f.burn_in,
                                    f.seed + static_cast<std::uint64_t>(c)});
  });
  for (int c = 0; c < f.chains; ++c) {
    const Trace& trace = traces[static_cast<std::size_t>(c)];
    if (!f.trace.empty()) write_trace(trace, chain_path(f.trace, c, f.chains));
    const Summary s = summarize(trace);
    Table table{{"l_j", "frequency"}, {}};
    for (int l = 1; l <= j; ++l) {
      const auto it = s.subsample_histogram.find(l);
      table.add_row({double(l), it == s.subsample_histogram.end() ? 0.0 : it->second});
    }
    double mean = 0.0;
    for (const auto& [l, freq] : s.subsample_histogram) mean += l * freq;
    out << "chain " << c << ": records = " << s.records
        << ", mean_l = " << format_double(s.posterior_mean_l)
        << ", mean_l_j = " << format_double(mean) << '\n';
    if (f.out.empty()) {
      write_table(table, out, TableFormat::Csv);
    } else {
      export_figure_data(table, chain_path(f.out, c, f.chains));
    }
  }
  return kOk;
}

// ---- summarize -----------------------------------------------------------

struct SummarizeFlags {
  std::string trace;
  std::string out;
  int bins = 50;
};

int summarize_cmd(const SummarizeFlags& f, std::ostream& out, std::ostream&) {
  if (f.bins < 1) throw UsageError("--bins must be >= 1");
  const Summary s = summarize(read_trace(f.trace), f.bins);
  if (f.out.empty()) {
    out << summary_to_json(s) << '\n';
  } else {
    write_summary(s, f.out);
  }
  return kOk;
}

// ---- export-figures ------------------------------------------------------

struct ExportFlags {
  std::vector<std::string> which{"all"};
  std::string out_dir = ".";
  std::string format = "csv";
  std::string data;
  int iterations = 15000;
  int burn_in = 5000;
  int grid_points = 9999;
  std::uint64_t seed = 0;
  double fig1_mass = 1.0;
  double fig1_a = 0.5;
  double fig1_p = 0.5;
  int fig1_max_m = 30;
};

int export_figures(const ExportFlags& f, std::ostream& out, std::ostream&) {
  static const std::set<std::string> known{"fig1", "fig2", "fig3", "fig4",
                                           "fig5", "fig6", "fig7", "all"};
  std::set<std::string> which;
  for (const auto& w : f.which) {
    if (!known.contains(w)) throw UsageError("--which: unknown figure '" + w + "'");
    if (w == "all") {
      which.insert(known.begin(), known.end());
      which.erase("all");
    } else {
      which.insert(w);
    }
  }
  if (f.format != "csv" && f.format != "json") throw UsageError("--format must be csv or json");
  if (f.iterations < 1 || f.burn_in < 0 || f.burn_in >= f.iterations) {
    throw UsageError("need 0 <= --burn-in < --iterations");
  }
  const ModelParams fig1_params{f.fig1_mass, f.fig1_a, f.fig1_p, Parameterization::Original};
  fig1_params.validate();
  if (f.fig1_max_m < 0 || f.fig1_max_m > 200) throw UsageError("--fig1-max-m must lie in [0, 200]");

  fs::create_directories(f.out_dir);
  out << "# export-figures\n# seed = " << f.seed << '\n';
  auto emit = [&](const Table& table, const std::string& name) {
    const fs::path path = fs::path(f.out_dir) / (name + "." + f.format);
    export_figure_data(table, path);
    out << "wrote " << path.string() << '\n';
  };
  const std::pair<Parameterization, std::string> models[] = {
      {Parameterization::Original, "gnbp"}, {Parameterization::Reparameterized, "reparam"}};

  if (which.contains("fig1")) emit(fig1_table(fig1_params, f.fig1_max_m), "fig1");
  for (const auto& [param, name] : models) {
    if (which.contains("fig2")) emit(fig2_table(param, 100, 1.0, kFig2Discounts), "fig2_" + name);
    if (which.contains("fig3")) {
      emit(fig3_table(param, 100.0, 1.0, kFig3Discounts, 100), "fig3_" + name);
    }
    if (which.contains("fig4")) {
      Fig4Config cfg;
      cfg.iterations = f.iterations;
      cfg.burn_in = f.burn_in;
      cfg.seed = f.seed;
      emit(fig4_table(param, kFig4Discounts, cfg), "fig4_" + name);
    }
  }
  if (which.contains("fig5") || which.contains("fig6") || which.contains("fig7")) {
    const std::string path = f.data.empty() ? std::string(GNBP_DEFAULT_DATA) : f.data;
    const Dataset data = load_dataset(path);
    SweepConfig sweep;
    sweep.base.iterations = f.iterations;
    sweep.base.burn_in = f.burn_in;
    sweep.base.grid_points = f.grid_points;
    sweep.base.seed = f.seed;
    sweep.base.validate();
    if (which.contains("fig5")) {
      sweep.discounts.assign(kFig5Discounts.begin(), kFig5Discounts.end());
    } else {
      sweep.discounts.assign(kFig6Discounts.begin(), kFig6Discounts.end());
    }
    if (data.dimension() == 1) sweep.density_grid = default_density_grid(data.points);
    const auto runs = run_sweep(data.points, sweep);
    if (which.contains("fig5")) {
      emit(fig5_table(runs), "fig5");
      emit(fig5_discount_table(runs), "fig5_discount");
    }
    // fig6 and fig7 show a subset of the discounts.
    std::vector<SweepRun> shown;
    for (const auto& r : runs) {
      const bool listed = std::find(kFig6Discounts.begin(), kFig6Discounts.end(), r.discount) !=
                          kFig6Discounts.end();
      if (r.learned || listed) shown.push_back(r);
    }
    const std::pair<Variant, std::string> posterior_figs[] = {{Variant::Gnbp, "fig6"},
                                                              {Variant::ReparamGnbp, "fig7"}};
    for (const auto& [variant, name] : posterior_figs) {
      if (!which.contains(name)) continue;
      const auto tables = posterior_tables(shown, variant, sweep.density_grid);
      emit(tables.sizes, name + "_sizes");
      emit(tables.clusters, name + "_clusters");
      emit(tables.non_unit, name + "_non_unit");
      emit(tables.density, name + "_density");
    }
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized negative binomial process: prior simulation, PMFs, "
               "posterior sampling and figure data.",
               "gnbp"};
  app.require_subcommand(1, 1);
  app.fallthrough(false);

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate-prior", "Draw cluster structures from the prior");
  sim_cmd->add_option("--mass", sim.mass, "Mass gamma0 (gnbp) or h0 (reparam)")->capture_default_str();
  sim_cmd->add_option("--a", sim.a, "Discount a < 1")->capture_default_str();
  sim.prob.add(sim_cmd);
  sim_cmd->add_option("--n-draws", sim.n_draws, "Number of draws")->capture_default_str();
  sim_cmd->add_option("--variant", sim.variant, "gnbp, reparam or nrmi")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "CSV file for the individual draws");

  PmfFlags pm;
  auto* pmf_cmd = app.add_subcommand("pmf", "Tabulate a PMF");
  pmf_cmd->add_option("--kind", pm.kind, "cluster-number, tnb or gnb")->capture_default_str();
  pmf_cmd->add_option("--m", pm.m, "Sample size (cluster-number)");
  pmf_cmd->add_option("--max", pm.max, "Largest value tabulated (tnb, gnb)")->capture_default_str();
  pmf_cmd->add_option("--mass", pm.mass, "Mass gamma0 (gnbp) or h0 (reparam)")->capture_default_str();
  pmf_cmd->add_option("--a", pm.a, "Discount a < 1")->capture_default_str();
  pm.prob.add(pmf_cmd);
  pmf_cmd->add_option("--variant", pm.variant, "gnbp, reparam or nrmi")->capture_default_str();
  pmf_cmd->add_option("--out", pm.out, "Output .csv or .json (default stdout)");

  FitFlags ft;
  auto* fit_cmd = app.add_subcommand("fit", "Run the Gaussian mixture sampler on a dataset");
  ft.opts["--data"] = fit_cmd->add_option("--data", ft.data, "Dataset CSV")->required();
  ft.opts["--config"] = fit_cmd->add_option("--config", ft.config, "key = value chain configuration");
  ft.opts["--variant"] = fit_cmd->add_option("--variant", ft.variant, "gnbp, reparam or nrmi")->capture_default_str();
  ft.opts["--a"] = fit_cmd->add_option("--a", ft.a, "Discount: a number or 'learn'")->capture_default_str();
  ft.opts["--p"] = fit_cmd->add_option("--p", ft.p, "Probability: a number or 'learn'")->capture_default_str();
  ft.opts["--mass"] = fit_cmd->add_option("--mass", ft.mass, "Mass: a number or 'learn'")->capture_default_str();
  ft.opts["--iterations"] = fit_cmd->add_option("--iterations", ft.iterations, "Total iterations")->capture_default_str();
  ft.opts["--burn-in"] = fit_cmd->add_option("--burn-in", ft.burn_in, "Discarded iterations")->capture_default_str();
  ft.opts["--grid-points"] = fit_cmd->add_option("--grid-points", ft.grid_points, "Griddy-Gibbs grid size")->capture_default_str();
  ft.opts["--seed"] = fit_cmd->add_option("--seed", ft.seed, "RNG seed (chain c uses seed + c)")->capture_default_str();
  ft.opts["--chains"] = fit_cmd->add_option("--chains", ft.chains, "Independent chains run in parallel")->capture_default_str();
  ft.opts["--out"] = fit_cmd->add_option("--out", ft.out, "Trace file (.jsonl or .csv)");
  ft.opts["--summary"] = fit_cmd->add_option("--summary", ft.summary, "Summary JSON file");

  PriorFlags pr;
  auto* prior_cmd = app.add_subcommand("prior-partitions", "Prediction-rule Gibbs chains over partitions of [m]");
  prior_cmd->add_option("--m", pr.m, "Sample size")->required();
  prior_cmd->add_option("--j", pr.j, "Count clusters among the first j elements (default m)");
  prior_cmd->add_option("--mass", pr.mass, "Mass gamma0 (gnbp) or h0 (reparam)")->capture_default_str();
  prior_cmd->add_option("--a", pr.a, "Discount a < 1")->capture_default_str();
  pr.prob.add(prior_cmd);
  prior_cmd->add_option("--variant", pr.variant, "gnbp, reparam or nrmi")->capture_default_str();
  prior_cmd->add_option("--iterations", pr.iterations, "Total sweeps")->capture_default_str();
  prior_cmd->add_option("--burn-in", pr.burn_in, "Discarded sweeps")->capture_default_str();
  prior_cmd->add_option("--seed", pr.seed, "RNG seed (chain c uses seed + c)")->capture_default_str();
  prior_cmd->add_option("--chains", pr.chains, "Independent chains run in parallel")->capture_default_str();
  prior_cmd->add_option("--out", pr.out, "Histogram of l_j (.csv or .json; default stdout)");
  prior_cmd->add_option("--trace", pr.trace, "Trace file (.jsonl or .csv)");

  SummarizeFlags sm;
  auto* sum_cmd = app.add_subcommand("summarize", "Summarize a trace file");
  sum_cmd->add_option("--trace", sm.trace, "Trace file (.jsonl or .csv)")->required();
  sum_cmd->add_option("--out", sm.out, "Summary JSON file (default stdout)");
  sum_cmd->add_option("--bins", sm.bins, "Bins of the parameter histograms")->capture_default_str();

  ExportFlags ex;
  auto* exp_cmd = app.add_subcommand("export-figures", "Write the data tables behind the figures");
  exp_cmd->add_option("--which", ex.which, "fig1 .. fig7 or all (repeatable)")->capture_default_str();
  exp_cmd->add_option("--out-dir", ex.out_dir, "Output directory")->capture_default_str();
  exp_cmd->add_option("--format", ex.format, "csv or json")->capture_default_str();
  exp_cmd->add_option("--data", ex.data, "Dataset for fig5-fig7 (default: bundled galaxy.csv)");
  exp_cmd->add_option("--iterations", ex.iterations, "Iterations per chain")->capture_default_str();
  exp_cmd->add_option("--burn-in", ex.burn_in, "Discarded iterations")->capture_default_str();
  exp_cmd->add_option("--grid-points", ex.grid_points, "Griddy-Gibbs grid size")->capture_default_str();
  exp_cmd->add_option("--seed", ex.seed, "Base RNG seed")->capture_default_str();
  exp_cmd->add_option("--fig1-mass", ex.fig1_mass, "fig1 gamma0")->capture_default_str();
  exp_cmd->add_option("--fig1-a", ex.fig1_a, "fig1 discount")->capture_default_str();
  exp_cmd->add_option("--fig1-p", ex.fig1_p, "fig1 probability")->capture_default_str();
  exp_cmd->add_option("--fig1-max-m", ex.fig1_max_m, "fig1 largest sample size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*sim_cmd) return simulate_prior(sim, out, err);
    if (*pmf_cmd) return pmf(pm, out, err);
    if (*fit_cmd) return fit(ft, out, err);
    if (*prior_cmd) return prior_partitions(pr, out, err);
    if (*sum_cmd) return summarize_cmd(sm, out, err);
    if (*exp_cmd) return export_figures(ex, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"gnbp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace gnbp::cli
