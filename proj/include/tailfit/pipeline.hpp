#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailfit/gof.hpp"
#include "tailfit/select.hpp"

namespace tailfit {

inline constexpr const char* kVersion = "0.1.0";

enum class Format { auto_detect, raw, histogram };

struct RunConfig {
  std::uint64_t master_seed = 42;
  int bootstrap_reps = 1000;
  int gof_sims = 1000;
  double gof_threshold = 0.1;
  std::int64_t min_tail = 50;
  double alpha_lo = 1.01;
  double alpha_hi = 20.0;
  SeriesTolerance series;
  bool pooled = false;

  void validate() const;  // throws config_error
  ScanOptions scan_options() const;
  GofOptions gof_options() const;
};

struct DescriptiveStats {
  std::int64_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::int64_t max = 0;
};

DescriptiveStats describe_sample(const CountSample& sample);

struct FieldRow {
  std::string field;
  DescriptiveStats stats;
  std::string skip_reason;  // non-empty: no usable power-law fit, rest absent
  std::optional<PowerLawFit> fit;
  std::optional<BootstrapResult> bootstrap;
  std::string bootstrap_failure;
  std::uint64_t bootstrap_seed = 0;
  std::optional<GofResult> gof;
  std::string gof_failure;
  std::uint64_t gof_seed = 0;
  std::vector<ComparisonResult> comparisons;
};

struct AnalysisReport {
  RunConfig config;
  std::vector<FieldRow> rows;  // sorted by field name
};

// Reads a sample from disk.  Raw format: one non-negative integer per line,
// '#' comments, optional '# field: <name>' header.  Histogram format:
// 'value,count' lines.  Unnamed samples take the file stem as their name.
CountSample ingest(const std::string& path, Format format = Format::auto_detect);

// estimate_xmin -> bootstrap_se -> gof_pvalue -> compare_all for one field.
// Stage seeds derive from (master_seed, field name, stage tag), so a row
// never depends on which other fields are in the run.  Partial failures
// degrade the row; only a failed cutoff scan skips it.
FieldRow analyze_field(const CountSample& sample, const RunConfig& config);

// Writes 'x,ccdf_empirical,ccdf_fit' over all distinct observed values >= 1;
// the fit column starts at the cutoff and is anchored to the empirical CCDF
// there.
void export_ccdf(const CountSample& sample, const PowerLawFit& fit, const std::string& path);

// Full run over already-ingested fields: analyzes each (in parallel when
// workers are available), optionally appends the pooled "ALL" row, sorts
// rows by field name.
AnalysisReport run(const std::vector<CountSample>& fields, const RunConfig& config);

std::string render_json(const AnalysisReport& report);
std::string render_csv(const AnalysisReport& report);

// Fixed-decimal cells used by the CSV table ("32 (5.4)", "3.91 (0.22)", ...).
std::string format_fixed(double v, int decimals);
std::string format_estimate_cell(double value, double se, int value_decimals, int se_decimals);

}  // namespace tailfit
