#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnbp/gibbs.hpp"

namespace gnbp {

/// Malformed input or an unreadable / unwritable file. line() is the
/// 1-based input line when known, else 0.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, int line = 0);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct Dataset {
  Points points;
  std::string name;
  std::string units;

  int size() const noexcept { return static_cast<int>(points.rows()); }
  int dimension() const noexcept { return static_cast<int>(points.cols()); }
};

/// CSV with one observation per row and one column per dimension. Blank
/// lines and lines starting with '#' are skipped; a "# units: ..." comment
/// sets Dataset::units. A first row with any non-numeric field is a header.
Dataset parse_dataset(std::string_view text, std::string name = {});
Dataset load_dataset(const std::filesystem::path& path);

/// Flat "key = value" view of a chain configuration. Every ChainConfig
/// field has a key; parsing starts from the defaults, so all keys are
/// optional. Unknown keys and bad values throw DataError.
std::vector<std::pair<std::string, std::string>> config_entries(const ChainConfig& config);
ChainConfig config_from_entries(const std::vector<std::pair<std::string, std::string>>& entries);
std::string format_chain_config(const ChainConfig& config);
ChainConfig parse_chain_config(std::string_view text);
ChainConfig load_chain_config(const std::filesystem::path& path);

enum class TraceFormat { JsonLines, Csv };

/// .csv -> Csv, .jsonl / .json -> JsonLines.
std::optional<TraceFormat> trace_format_for(const std::filesystem::path& path);

/// JSON lines: a preamble object {"type":"preamble", kind, dimension,
/// config} followed by one {"type":"record", ...} per record. CSV: the same
/// preamble as "# key = value" comment lines, then a fixed header. Doubles
/// are written in shortest round-trip form.
void write_trace(const Trace& trace, std::ostream& out, TraceFormat format);
void write_trace(const Trace& trace, const std::filesystem::path& path);
Trace read_trace(std::istream& in, TraceFormat format);
Trace read_trace(const std::filesystem::path& path);

/// Equal-width histogram over [lo, hi] normalized to sum to 1.
struct ParamHistogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> freq;

  double bin_center(std::size_t b) const;
};

/// Label-invariant posterior summaries; means are over records of the
/// per-record statistic (l, unit/l, m/l, l - unit).
struct Summary {
  std::size_t records = 0;
  double posterior_mean_l = 0.0;
  double unit_size_ratio = 0.0;
  double mean_cluster_size = 0.0;
  double non_unit_clusters = 0.0;
  double mean_discount = 0.0;
  double mean_prob = 0.0;
  double mean_mass = 0.0;
  /// Pooled over records: share of clusters of each size (needs recorded
  /// sizes, else empty).
  std::map<int, double> size_histogram;
  std::map<int, double> l_histogram;
  std::map<int, double> non_unit_histogram;
  /// Distribution of l among the first j elements (prior chains).
  std::map<int, double> subsample_histogram;
  ParamHistogram discount;
  ParamHistogram prob;
  ParamHistogram mass;
};

/// Throws std::invalid_argument on an empty trace.
Summary summarize(const Trace& trace, int bins = 50);

std::string summary_to_json(const Summary& summary);
void write_summary(const Summary& summary, const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);
/// Whole-string parse; std::nullopt on any trailing text.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

}  // namespace gnbp
