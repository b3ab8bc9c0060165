#include "tailfit/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tailfit/errors.hpp"
#include "tailfit/parallel.hpp"
#include "tailfit/rng.hpp"

namespace tailfit {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::int64_t parse_int(const std::string& token, const std::string& path, int line) {
  const std::string t = trim(token);
  if (t.empty()) throw parse_error(path + ": empty value", line);
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(t.c_str(), &end, 10);
  if (errno == ERANGE) throw parse_error(path + ": integer out of range '" + t + "'", line);
  if (end == t.c_str() || *end != '\0')
    throw parse_error(path + ": non-integer token '" + t + "'", line);
  if (v < 0) throw parse_error(path + ": negative value " + std::to_string(v), line);
  return v;
}

bool looks_like_header(const std::string& line) {
  for (char ch : line)
    if (std::isalpha(static_cast<unsigned char>(ch))) return true;
  return false;
}

}  // namespace

void RunConfig::validate() const {
  if (bootstrap_reps < 2) throw config_error("bootstrap_reps must be >= 2");
  if (gof_sims < 100) throw config_error("gof_sims must be >= 100");
  if (!(gof_threshold > 0.0 && gof_threshold < 1.0))
    throw config_error("gof_threshold must lie in (0, 1)");
  if (min_tail < 2) throw config_error("min_tail must be >= 2");
  if (!(alpha_lo > 1.0) || !(alpha_hi > alpha_lo))
    throw config_error("alpha bounds must satisfy 1 < lo < hi");
  series.validate();
}

ScanOptions RunConfig::scan_options() const {
  ScanOptions s;
  s.min_tail = min_tail;
  s.fit.alpha_lo = alpha_lo;
  s.fit.alpha_hi = alpha_hi;
  s.fit.series = series;
  return s;
}

GofOptions RunConfig::gof_options() const {
  GofOptions g;
  g.n_sims = gof_sims;
  g.threshold = gof_threshold;
  g.scan = scan_options();
  return g;
}

DescriptiveStats describe_sample(const CountSample& sample) {
  DescriptiveStats d;
  d.n = sample.n();
  if (d.n == 0) return d;
  Kahan sum;
  for (std::int64_t v : sample.counts) sum.add(static_cast<double>(v));
  d.mean = sum.value() / static_cast<double>(d.n);
  Kahan ss;
  for (std::int64_t v : sample.counts) {
    double dev = static_cast<double>(v) - d.mean;
    ss.add(dev * dev);
  }
  d.sd = d.n > 1 ? std::sqrt(ss.value() / static_cast<double>(d.n - 1)) : 0.0;
  d.max = sample.counts.back();
  return d;
}

CountSample ingest(const std::string& path, Format format) {
  Format fmt = format;
  if (fmt == Format::auto_detect)
    fmt = std::filesystem::path(path).extension() == ".hist" ? Format::histogram : Format::raw;

  std::ifstream in(path);
  if (!in) throw io_error("cannot open input file: " + path);

  std::string name = std::filesystem::path(path).stem().string();
  std::vector<std::int64_t> values;
  std::string line;
  int line_no = 0;
  bool header_allowed = fmt == Format::histogram;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string key = "field:";
      std::string body = trim(t.substr(1));
      if (body.rfind(key, 0) == 0) {
        std::string n = trim(body.substr(key.size()));
        if (!n.empty()) name = n;
      }
      continue;
    }
    if (fmt == Format::raw) {
      values.push_back(parse_int(t, path, line_no));
    } else {
      std::size_t comma = t.find(',');
      if (comma == std::string::npos) {
        if (header_allowed && looks_like_header(t)) {
          header_allowed = false;
          continue;
        }
        throw parse_error(path + ": expected 'value,count'", line_no);
      }
      std::string left = t.substr(0, comma);
      std::string right = t.substr(comma + 1);
      if (header_allowed && (looks_like_header(left) || looks_like_header(right))) {
        header_allowed = false;
        continue;
      }
      header_allowed = false;
      std::int64_t value = parse_int(left, path, line_no);
      std::int64_t count = parse_int(right, path, line_no);
      for (std::int64_t i = 0; i < count; ++i) values.push_back(value);
    }
  }
  if (values.empty()) throw parse_error(path + ": no observations", line_no);
  return CountSample::from_values(std::move(name), std::move(values));
}

FieldRow analyze_field(const CountSample& sample, const RunConfig& config) {
  FieldRow row;
  row.field = sample.name;
  row.stats = describe_sample(sample);

  ScanOptions scan = config.scan_options();
  try {
    row.fit = estimate_xmin(sample, scan);
  } catch (const error& e) {
    row.skip_reason = e.what();
    return row;
  }

  std::uint64_t field_seed = mix_seed(config.master_seed, sample.name);
  row.bootstrap_seed = mix_seed(field_seed, "bootstrap");
  row.gof_seed = mix_seed(field_seed, "gof");

  try {
    BootstrapResult b = bootstrap_se(sample, config.bootstrap_reps, row.bootstrap_seed, scan);
    row.bootstrap = b;
    row.fit->se_alpha = b.se_alpha;
    row.fit->se_x0 = b.se_x0;
  } catch (const error& e) {
    row.bootstrap_failure = e.what();
  }

  try {
    row.gof = gof_pvalue(sample, *row.fit, config.gof_options(), row.gof_seed);
  } catch (const error& e) {
    row.gof_failure = e.what();
  }

  row.comparisons = compare_all(sample, *row.fit, scan.fit, config.gof_threshold);
  return row;
}

void export_ccdf(const CountSample& sample, const PowerLawFit& fit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write CCDF file: " + path);

  double n = static_cast<double>(sample.n());
  std::int64_t x0 = fit.model.x0();
  // suffix counts over distinct values
  std::vector<std::int64_t> value;
  std::vector<std::int64_t> suffix;
  for (std::size_t i = 0; i < sample.counts.size();) {
    std::size_t j = i;
    while (j < sample.counts.size() && sample.counts[j] == sample.counts[i]) ++j;
    value.push_back(sample.counts[i]);
    suffix.push_back(static_cast<std::int64_t>(sample.counts.size() - i));
    i = j;
  }

  double anchor = 0.0;
  for (std::size_t i = 0; i < value.size(); ++i)
    if (value[i] == x0) anchor = static_cast<double>(suffix[i]) / n;

  char buf[64];
  out << "x,ccdf_empirical,ccdf_fit\n";
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] < 1) continue;
    double emp = static_cast<double>(suffix[i]) / n;
    std::snprintf(buf, sizeof buf, "%.12g", emp);
    out << value[i] << ',' << buf;
    if (value[i] >= x0) {
      std::snprintf(buf, sizeof buf, "%.12g", anchor * fit.model.ccdf(value[i]));
      out << ',' << buf;
    } else {
      out << ',';
    }
    out << '\n';
  }
  if (!out) throw io_error("error while writing CCDF file: " + path);
}

AnalysisReport run(const std::vector<CountSample>& fields, const RunConfig& config) {
  config.validate();
  AnalysisReport report;
  report.config = config;
  report.rows.resize(fields.size());
  parallel_for(fields.size(),
               [&](std::size_t i) { report.rows[i] = analyze_field(fields[i], config); });

  if (config.pooled) {
    std::vector<std::int64_t> all;
    for (const auto& f : fields) all.insert(all.end(), f.counts.begin(), f.counts.end());
    report.rows.push_back(analyze_field(CountSample::from_values("ALL", std::move(all)), config));
  }

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const FieldRow& a, const FieldRow& b) { return a.field < b.field; });
  return report;
}

// --- Rendering ----------------------------------------------------------------

std::string format_fixed(double v, int decimals) {
  if (!std::isfinite(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  bool zeroish = s.find_first_of("123456789") == std::string::npos;
  if (zeroish && !s.empty() && s[0] == '-') s.erase(0, 1);  // never print "-0.000"
  return s;
}

std::string format_estimate_cell(double value, double se, int value_decimals, int se_decimals) {
  return format_fixed(value, value_decimals) + " (" + format_fixed(se, se_decimals) + ")";
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

ordered_json json_double(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json comparison_json(const ComparisonResult& c) {
  ordered_json j;
  j["family"] = family_name(c.alternative);
  j["nested"] = c.nested;
  if (!c.fitted) {
    j["status"] = "failed";
    j["failure"] = c.failure;
    return j;
  }
  j["status"] = "ok";
  j["lr"] = json_double(c.lr);
  j["sigma_lr"] = json_double(c.sigma_lr);
  j["stat"] = json_double(c.stat);
  j["p_value"] = json_double(c.p_value);
  j["verdict"] = verdict_name(c.verdict);
  if (c.alt_model) j["model"] = describe(*c.alt_model);
  return j;
}

}  // namespace

std::string render_json(const AnalysisReport& report) {
  ordered_json j;
  j["version"] = kVersion;
  j["config"] = {{"seed", report.config.master_seed},
                 {"bootstrap_reps", report.config.bootstrap_reps},
                 {"gof_sims", report.config.gof_sims},
                 {"gof_threshold", report.config.gof_threshold},
                 {"min_tail", report.config.min_tail},
                 {"alpha_bounds", {report.config.alpha_lo, report.config.alpha_hi}},
                 {"pooled", report.config.pooled}};
  j["fields"] = ordered_json::array();
  for (const FieldRow& row : report.rows) {
    ordered_json f;
    f["name"] = row.field;
    f["stats"] = {{"n", row.stats.n},
                  {"mean", json_double(row.stats.mean)},
                  {"sd", json_double(row.stats.sd)},
                  {"max", row.stats.max}};
    if (!row.skip_reason.empty()) {
      f["skipped"] = row.skip_reason;
      j["fields"].push_back(f);
      continue;
    }
    const PowerLawFit& fit = *row.fit;
    f["power_law"] = {{"x0", fit.model.x0()},
                      {"alpha", json_double(fit.model.alpha())},
                      {"se_x0", json_double(fit.se_x0)},
                      {"se_alpha", json_double(fit.se_alpha)},
                      {"n_tail", fit.n_tail},
                      {"frac_tail", json_double(fit.frac_tail)},
                      {"ks", json_double(fit.ks)}};
    if (row.bootstrap) {
      f["bootstrap"] = {{"seed", row.bootstrap_seed},
                        {"n_ok", row.bootstrap->n_ok},
                        {"n_failures", row.bootstrap->n_failures}};
    } else {
      f["bootstrap"] = {{"seed", row.bootstrap_seed}, {"failure", row.bootstrap_failure}};
    }
    if (row.gof) {
      f["gof"] = {{"seed", row.gof_seed},          {"k", json_double(row.gof->k)},
                  {"n_sims", row.gof->n_sims},     {"n_exceed", row.gof->n_exceed},
                  {"n_failures", row.gof->n_failures}, {"p_value", json_double(row.gof->p_value)},
                  {"reject", row.gof->reject}};
    } else {
      f["gof"] = {{"seed", row.gof_seed}, {"failure", row.gof_failure}};
    }
    f["comparisons"] = ordered_json::array();
    for (const auto& c : row.comparisons) f["comparisons"].push_back(comparison_json(c));
    j["fields"].push_back(f);
  }
  return j.dump(2) + "\n";
}

std::string render_csv(const AnalysisReport& report) {
  static constexpr Family kOrder[] = {Family::exponential, Family::weibull, Family::log_normal,
                                      Family::tsallis,     Family::yule,    Family::power_law_cutoff};
  std::ostringstream out;
  out << "field,n,mean,sd,max,x0,alpha,n_tail,pct_tail,gof_p";
  for (Family fam : kOrder) {
    const char* n = family_name(fam);
    out << ',' << n << "_lr," << n << "_stat," << n << "_p";
  }
  out << '\n';

  for (const FieldRow& row : report.rows) {
    out << csv_escape(row.field) << ',' << row.stats.n << ',' << format_fixed(row.stats.mean, 2)
        << ',' << format_fixed(row.stats.sd, 2) << ',' << row.stats.max;
    if (!row.skip_reason.empty()) {
      for (int i = 0; i < 5 + 18; ++i) out << ",-";
      out << '\n';
      continue;
    }
    const PowerLawFit& fit = *row.fit;
    out << ',' << format_estimate_cell(static_cast<double>(fit.model.x0()), fit.se_x0, 0, 1);
    out << ',' << format_estimate_cell(fit.model.alpha(), fit.se_alpha, 2, 2);
    out << ',' << fit.n_tail;
    out << ',' << format_fixed(100.0 * fit.frac_tail, 1);
    out << ',' << (row.gof ? format_fixed(row.gof->p_value, 3) : "-");
    for (std::size_t i = 0; i < 6; ++i) {
      const ComparisonResult* c =
          i < row.comparisons.size() && row.comparisons[i].alternative == kOrder[i]
              ? &row.comparisons[i]
              : nullptr;
      if (c && c->fitted)
        out << ',' << format_fixed(c->lr, 3) << ',' << format_fixed(c->stat, 3) << ','
            << format_fixed(c->p_value, 3);
      else
        out << ",-,-,-";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace tailfit
