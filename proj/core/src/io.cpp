#include "gnbp/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gnbp {

DataError::DataError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  // from_chars rejects a leading '+'.
  const char* begin = !text.empty() && text.front() == '+' ? text.data() + 1 : text.data();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return value;
}

std::optional<long long> parse_integer(std::string_view text) {
  long long value = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return value;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

Dataset parse_dataset(std::string_view text, std::string name) {
  Dataset ds;
  ds.name = std::move(name);
  std::vector<std::vector<double>> rows;
  bool header_allowed = true;
  int line_no = 0;
  for (std::string_view raw : lines_of(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      if (body.starts_with("units:")) ds.units = std::string(trim(body.substr(6)));
      continue;
    }
    const auto fields = split(line, ',');
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (auto f : fields) {
      const auto v = parse_double(trim(f));
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      // A header row may contain anything but nan/inf-like numbers.
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw DataError("malformed row '" + std::string(line) + "'", line_no);
    }
    header_allowed = false;
    for (double v : row) {
      if (!std::isfinite(v)) throw DataError("non-finite value", line_no);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("expected " + std::to_string(rows.front().size()) + " columns, got " +
                          std::to_string(row.size()),
                      line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("dataset has no observations");
  ds.points.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t d = 0; d < rows[i].size(); ++d) {
      ds.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = rows[i][d];
    }
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  try {
    return parse_dataset(read_file(path), path.stem().string());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what(), e.line());
  }
}

// ---- configuration -------------------------------------------------------

namespace {

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string format_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

struct ConfigParser {
  const std::string& key;
  const std::string& value;

  [[noreturn]] void bad(const char* what) const {
    throw DataError("config key '" + key + "': " + what + ", got '" + value + "'");
  }
  double real() const {
    const auto v = parse_double(value);
    if (!v || !std::isfinite(*v)) bad("expected a finite number");
    return *v;
  }
  int integer() const {
    const auto v = parse_integer(value);
    if (!v || *v < 0 || *v > 2'000'000'000) bad("expected a non-negative integer");
    return static_cast<int>(*v);
  }
  std::uint64_t seed() const {
    std::uint64_t s = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), s);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
      bad("expected an unsigned 64-bit integer");
    }
    return s;
  }
  bool boolean() const {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad("expected true or false");
  }
  Eigen::VectorXd vector() const {
    std::vector<double> parts;
    for (auto f : split(value, ';')) {
      const auto v = parse_double(trim(f));
      if (!v || !std::isfinite(*v)) bad("expected ';'-separated numbers");
      parts.push_back(*v);
    }
    return Eigen::Map<Eigen::VectorXd>(parts.data(), static_cast<Eigen::Index>(parts.size()));
  }
};

}  // namespace

std::vector<std::pair<std::string, std::string>> config_entries(const ChainConfig& c) {
  std::vector<std::pair<std::string, std::string>> e = {
      {"iterations", std::to_string(c.iterations)},
      {"burn_in", std::to_string(c.burn_in)},
      {"seed", std::to_string(c.seed)},
      {"grid_points", std::to_string(c.grid_points)},
      {"variant", std::string(to_string(c.variant))},
      {"discount", format_double(c.discount.value)},
      {"learn_discount", format_bool(c.discount.learn)},
      {"prob", format_double(c.prob.value)},
      {"learn_prob", format_bool(c.prob.learn)},
      {"mass", format_double(c.mass.value)},
      {"learn_mass", format_bool(c.mass.learn)},
      {"learn_hypers", format_bool(c.learn_hypers)},
      {"record_states", format_bool(c.record_states)},
  };
  if (c.initial_hypers) {
    e.emplace_back("precision", format_double(c.initial_hypers->precision));
    e.emplace_back("base_mean", format_vector(c.initial_hypers->base_mean));
    e.emplace_back("base_precision", format_double(c.initial_hypers->base_precision));
  }
  const Priors& p = c.priors;
  e.emplace_back("prior.mass_shape", format_double(p.mass_shape));
  e.emplace_back("prior.mass_rate", format_double(p.mass_rate));
  e.emplace_back("prior.precision_shape", format_double(p.precision_shape));
  e.emplace_back("prior.precision_rate", format_double(p.precision_rate));
  e.emplace_back("prior.base_mean_precision", format_double(p.base_mean_precision));
  e.emplace_back("prior.base_precision_shape", format_double(p.base_precision_shape));
  e.emplace_back("prior.base_precision_rate", format_double(p.base_precision_rate));
  e.emplace_back("prior.prob_alpha", format_double(p.prob_alpha));
  e.emplace_back("prior.prob_beta", format_double(p.prob_beta));
  return e;
}

ChainConfig config_from_entries(const std::vector<std::pair<std::string, std::string>>& entries) {
  ChainConfig c;
  std::optional<double> precision;
  std::optional<double> base_precision;
  std::optional<Eigen::VectorXd> base_mean;
  for (const auto& [key, value] : entries) {
    const ConfigParser v{key, value};
    if (key == "iterations") c.iterations = v.integer();
    else if (key == "burn_in") c.burn_in = v.integer();
    else if (key == "seed") c.seed = v.seed();
    else if (key == "grid_points") c.grid_points = v.integer();
    else if (key == "variant") {
      const auto parsed = parse_variant(value);
      if (!parsed) v.bad("expected gnbp, reparam or nrmi");
      c.variant = *parsed;
    }
    else if (key == "discount") c.discount.value = v.real();
    else if (key == "learn_discount") c.discount.learn = v.boolean();
    else if (key == "prob") c.prob.value = v.real();
    else if (key == "learn_prob") c.prob.learn = v.boolean();
    else if (key == "mass") c.mass.value = v.real();
    else if (key == "learn_mass") c.mass.learn = v.boolean();
    else if (key == "learn_hypers") c.learn_hypers = v.boolean();
    else if (key == "record_states") c.record_states = v.boolean();
    else if (key == "precision") precision = v.real();
    else if (key == "base_mean") base_mean = v.vector();
    else if (key == "base_precision") base_precision = v.real();
    else if (key == "prior.mass_shape") c.priors.mass_shape = v.real();
    else if (key == "prior.mass_rate") c.priors.mass_rate = v.real();
    else if (key == "prior.precision_shape") c.priors.precision_shape = v.real();
    else if (key == "prior.precision_rate") c.priors.precision_rate = v.real();
    else if (key == "prior.base_mean_precision") c.priors.base_mean_precision = v.real();
    else if (key == "prior.base_precision_shape") c.priors.base_precision_shape = v.real();
    else if (key == "prior.base_precision_rate") c.priors.base_precision_rate = v.real();
    else if (key == "prior.prob_alpha") c.priors.prob_alpha = v.real();
    else if (key == "prior.prob_beta") c.priors.prob_beta = v.real();
    else throw DataError("unknown config key '" + key + "'");
  }
  const int given = int{precision.has_value()} + int{base_mean.has_value()} +
                    int{base_precision.has_value()};
  if (given == 3) {
    c.initial_hypers = Hypers{*precision, *base_mean, *base_precision};
  } else if (given != 0) {
    throw DataError("precision, base_mean and base_precision must be given together");
  }
  return c;
}

std::string format_chain_config(const ChainConfig& config) {
  std::string out;
  for (const auto& [k, v] : config_entries(config)) out += k + " = " + v + "\n";
  return out;
}

namespace {

std::optional<std::pair<std::string, std::string>> parse_key_value(std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  return std::pair{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))};
}

}  // namespace

ChainConfig parse_chain_config(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  int line_no = 0;
  for (auto raw : lines_of(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto kv = parse_key_value(line);
    if (!kv || kv->first.empty()) throw DataError("expected key = value", line_no);
    entries.push_back(std::move(*kv));
  }
  return config_from_entries(entries);
}

ChainConfig load_chain_config(const std::filesystem::path& path) {
  try {
    return parse_chain_config(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what(), e.line());
  }
}

// ---- traces --------------------------------------------------------------

std::optional<TraceFormat> trace_format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return TraceFormat::Csv;
  if (ext == ".jsonl" || ext == ".json") return TraceFormat::JsonLines;
  return std::nullopt;
}

namespace {

using nlohmann::json;

constexpr std::string_view kCsvHeader =
    "iteration,sample_size,num_clusters,unit_clusters,subsample_clusters,mass,discount,"
    "prob,precision,base_precision,log_ecpf,base_mean,sizes,atoms";

template <class T, class Fmt>
std::string join(const std::vector<T>& v, char sep, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += sep;
    out += fmt(v[i]);
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view field, int line_no) {
  std::vector<double> out;
  if (field.empty()) return out;
  for (auto f : split(field, ';')) {
    const auto v = parse_double(f);
    if (!v) throw DataError("bad number '" + std::string(f) + "'", line_no);
    out.push_back(*v);
  }
  return out;
}

json record_to_json(const TraceRecord& r) {
  return json{{"type", "record"},
              {"iteration", r.iteration},
              {"sample_size", r.sample_size},
              {"num_clusters", r.num_clusters},
              {"unit_clusters", r.unit_clusters},
              {"subsample_clusters", r.subsample_clusters},
              {"mass", r.mass},
              {"discount", r.discount},
              {"prob", r.prob},
              {"precision", r.precision},
              {"base_mean", r.base_mean},
              {"base_precision", r.base_precision},
              {"log_ecpf", r.log_ecpf},
              {"sizes", r.sizes},
              {"atoms", r.atoms}};
}

TraceRecord record_from_json(const json& j) {
  TraceRecord r;
  r.iteration = j.at("iteration").get<int>();
  r.sample_size = j.at("sample_size").get<int>();
  r.num_clusters = j.at("num_clusters").get<int>();
  r.unit_clusters = j.at("unit_clusters").get<int>();
  r.subsample_clusters = j.at("subsample_clusters").get<int>();
  r.mass = j.at("mass").get<double>();
  r.discount = j.at("discount").get<double>();
  r.prob = j.at("prob").get<double>();
  r.precision = j.at("precision").get<double>();
  r.base_mean = j.at("base_mean").get<std::vector<double>>();
  r.base_precision = j.at("base_precision").get<double>();
  r.log_ecpf = j.at("log_ecpf").get<double>();
  r.sizes = j.at("sizes").get<std::vector<int>>();
  r.atoms = j.at("atoms").get<std::vector<std::vector<double>>>();
  return r;
}

void apply_preamble_entry(Trace& trace, const std::string& key, const std::string& value,
                          std::vector<std::pair<std::string, std::string>>& config) {
  if (key == "kind") {
    trace.kind = value;
  } else if (key == "dimension") {
    const auto d = parse_integer(value);
    if (!d || *d < 0) throw DataError("bad trace dimension '" + value + "'");
    trace.dimension = static_cast<int>(*d);
  } else {
    config.emplace_back(key, value);
  }
}

}  // namespace

void write_trace(const Trace& trace, std::ostream& out, TraceFormat format) {
  if (format == TraceFormat::JsonLines) {
    json config = json::object();
    for (const auto& [k, v] : config_entries(trace.config)) config[k] = v;
    out << json{{"type", "preamble"},
                {"kind", trace.kind},
                {"dimension", trace.dimension},
                {"config", config}}
               .dump()
        << '\n';
    for (const auto& r : trace.records) out << record_to_json(r).dump() << '\n';
    return;
  }
  out << "# gnbp trace\n";
  out << "# kind = " << trace.kind << '\n';
  out << "# dimension = " << trace.dimension << '\n';
  for (const auto& [k, v] : config_entries(trace.config)) out << "# " << k << " = " << v << '\n';
  out << kCsvHeader << '\n';
  auto fmt_int = [](int v) { return std::to_string(v); };
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << r.sample_size << ',' << r.num_clusters << ','
        << r.unit_clusters << ',' << r.subsample_clusters << ',' << format_double(r.mass)
        << ',' << format_double(r.discount) << ',' << format_double(r.prob) << ','
        << format_double(r.precision) << ',' << format_double(r.base_precision) << ','
        << format_double(r.log_ecpf) << ',' << join(r.base_mean, ';', format_double) << ','
        << join(r.sizes, ';', fmt_int) << ','
        << join(r.atoms, '|',
                [](const std::vector<double>& a) { return join(a, ';', format_double); })
        << '\n';
  }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  const auto format = trace_format_for(path);
  if (!format) throw DataError("trace path must end in .csv, .jsonl or .json: " + path.string());
  auto out = open_for_write(path);
  write_trace(trace, out, *format);
  if (!out) throw DataError("failed writing " + path.string());
}

Trace read_trace(std::istream& in, TraceFormat format) {
  Trace trace;
  std::vector<std::pair<std::string, std::string>> config;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (format == TraceFormat::JsonLines) {
      json j;
      try {
        j = json::parse(line);
        const auto type = j.at("type").get<std::string>();
        if (type == "preamble") {
          trace.kind = j.at("kind").get<std::string>();
          trace.dimension = j.at("dimension").get<int>();
          for (const auto& [k, v] : j.at("config").items()) {
            config.emplace_back(k, v.get<std::string>());
          }
        } else if (type == "record") {
          trace.records.push_back(record_from_json(j));
        } else {
          throw DataError("unknown record type '" + type + "'", line_no);
        }
      } catch (const json::exception& e) {
        throw DataError(std::string("bad trace line: ") + e.what(), line_no);
      }
      continue;
    }
    const auto text = trim(line);
    if (text.front() == '#') {
      if (auto kv = parse_key_value(trim(text.substr(1)))) {
        apply_preamble_entry(trace, kv->first, kv->second, config);
      }
      continue;
    }
    if (!header_seen) {
      if (text != kCsvHeader) throw DataError("unexpected trace header", line_no);
      header_seen = true;
      continue;
    }
    const auto f = split(text, ',');
    if (f.size() != 14) throw DataError("expected 14 fields", line_no);
    auto integer = [&](std::string_view s) {
      const auto v = parse_integer(s);
      if (!v) throw DataError("bad integer '" + std::string(s) + "'", line_no);
      return static_cast<int>(*v);
    };
    auto real = [&](std::string_view s) {
      const auto v = parse_double(s);
      if (!v) throw DataError("bad number '" + std::string(s) + "'", line_no);
      return *v;
    };
    TraceRecord r;
    r.iteration = integer(f[0]);
    r.sample_size = integer(f[1]);
    r.num_clusters = integer(f[2]);
    r.unit_clusters = integer(f[3]);
    r.subsample_clusters = integer(f[4]);
    r.mass = real(f[5]);
    r.discount = real(f[6]);
    r.prob = real(f[7]);
    r.precision = real(f[8]);
    r.base_precision = real(f[9]);
    r.log_ecpf = real(f[10]);
    r.base_mean = parse_doubles(f[11], line_no);
    if (!f[12].empty()) {
      for (auto s : split(f[12], ';')) r.sizes.push_back(integer(s));
    }
    if (!f[13].empty()) {
      for (auto a : split(f[13], '|')) r.atoms.push_back(parse_doubles(a, line_no));
    }
    trace.records.push_back(std::move(r));
  }
  trace.config = config_from_entries(config);
  return trace;
}

Trace read_trace(const std::filesystem::path& path) {
  const auto format = trace_format_for(path);
  if (!format) throw DataError("trace path must end in .csv, .jsonl or .json: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_trace(in, *format);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what(), e.line());
  }
}

// ---- summaries -----------------------------------------------------------

double ParamHistogram::bin_center(std::size_t b) const {
  if (freq.size() <= 1) return lo;
  return lo + (static_cast<double>(b) + 0.5) * (hi - lo) / static_cast<double>(freq.size());
}

namespace {

ParamHistogram histogram_of(const std::vector<double>& values, int bins) {
  ParamHistogram h;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.lo = *lo;
  h.hi = *hi;
  if (h.hi <= h.lo) {
    h.freq = {1.0};
    return h;
  }
  h.freq.assign(static_cast<std::size_t>(bins), 0.0);
  const double width = (h.hi - h.lo) / bins;
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - h.lo) / width);
    h.freq[std::min(b, h.freq.size() - 1)] += 1.0;
  }
  for (double& f : h.freq) f /= static_cast<double>(values.size());
  return h;
}

void normalize(std::map<int, double>& h) {
  double total = 0.0;
  for (const auto& [k, v] : h) total += v;
  if (total > 0.0) {
    for (auto& [k, v] : h) v /= total;
  }
}

json histogram_json(const std::map<int, double>& h) {
  json out = json::object();
  for (const auto& [k, v] : h) out[std::to_string(k)] = v;
  return out;
}

json param_json(const ParamHistogram& h) {
  return json{{"lo", h.lo}, {"hi", h.hi}, {"freq", h.freq}};
}

}  // namespace

Summary summarize(const Trace& trace, int bins) {
  if (trace.records.empty()) throw std::invalid_argument("summarize: empty trace");
  if (bins < 1) throw std::invalid_argument("summarize: bins must be >= 1");
  Summary s;
  s.records = trace.records.size();
  std::vector<double> discounts, probs, masses;
  bool sizes_complete = true;
  bool has_subsample = true;
  for (const auto& r : trace.records) {
    const double l = r.num_clusters;
    if (l < 1) throw std::invalid_argument("summarize: record without clusters");
    s.posterior_mean_l += l;
    s.unit_size_ratio += r.unit_clusters / l;
    s.mean_cluster_size += r.sample_size / l;
    s.non_unit_clusters += l - r.unit_clusters;
    s.mean_discount += r.discount;
    s.mean_prob += r.prob;
    s.mean_mass += r.mass;
    s.l_histogram[r.num_clusters] += 1.0;
    s.non_unit_histogram[r.num_clusters - r.unit_clusters] += 1.0;
    if (r.subsample_clusters >= 0) {
      s.subsample_histogram[r.subsample_clusters] += 1.0;
    } else {
      has_subsample = false;
    }
    if (static_cast<int>(r.sizes.size()) != r.num_clusters) sizes_complete = false;
    if (sizes_complete) {
      for (int n : r.sizes) s.size_histogram[n] += 1.0;
    }
    discounts.push_back(r.discount);
    probs.push_back(r.prob);
    masses.push_back(r.mass);
  }
  const double n = static_cast<double>(s.records);
  for (double* v : {&s.posterior_mean_l, &s.unit_size_ratio, &s.mean_cluster_size,
                    &s.non_unit_clusters, &s.mean_discount, &s.mean_prob, &s.mean_mass}) {
    *v /= n;
  }
  if (!sizes_complete) s.size_histogram.clear();
  if (!has_subsample) s.subsample_histogram.clear();
  normalize(s.size_histogram);
  normalize(s.l_histogram);
  normalize(s.non_unit_histogram);
  normalize(s.subsample_histogram);
  s.discount = histogram_of(discounts, bins);
  s.prob = histogram_of(probs, bins);
  s.mass = histogram_of(masses, bins);
  return s;
}

std::string summary_to_json(const Summary& s) {
  const json j{{"records", s.records},
               {"posterior_mean_l", s.posterior_mean_l},
               {"unit_size_ratio", s.unit_size_ratio},
               {"mean_cluster_size", s.mean_cluster_size},
               {"non_unit_clusters", s.non_unit_clusters},
               {"mean_discount", s.mean_discount},
               {"mean_prob", s.mean_prob},
               {"mean_mass", s.mean_mass},
               {"size_histogram", histogram_json(s.size_histogram)},
               {"l_histogram", histogram_json(s.l_histogram)},
               {"non_unit_histogram", histogram_json(s.non_unit_histogram)},
               {"subsample_histogram", histogram_json(s.subsample_histogram)},
               {"discount_histogram", param_json(s.discount)},
               {"prob_histogram", param_json(s.prob)},
               {"mass_histogram", param_json(s.mass)}};
  return j.dump(2);
}

void write_summary(const Summary& summary, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << summary_to_json(summary) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace gnbp
