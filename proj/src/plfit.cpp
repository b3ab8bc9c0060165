#include "tailfit/plfit.hpp"

#include <algorithm>
#include <cmath>

#include "tailfit/errors.hpp"
#include "tailfit/parallel.hpp"
#include "tailfit/rng.hpp"

namespace tailfit {

namespace {

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

// Distinct values with counts plus suffix aggregates, the working form for
// the cutoff scan: tail size and sum of count*ln(value) at candidate i are
// O(1) lookups.
struct DistinctView {
  std::vector<std::int64_t> value;
  std::vector<std::int64_t> count;
  std::vector<std::int64_t> tail_count;  // sum of count[j], j >= i
  std::vector<double> tail_sumlog;       // sum of count[j]*ln(value[j]), j >= i
};

DistinctView distinct_view(const std::vector<std::int64_t>& sorted) {
  DistinctView d;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    d.value.push_back(sorted[i]);
    d.count.push_back(static_cast<std::int64_t>(j - i));
    i = j;
  }
  std::size_t m = d.value.size();
  d.tail_count.assign(m, 0);
  d.tail_sumlog.assign(m, 0.0);
  std::int64_t run = 0;
  Kahan slog;
  for (std::size_t i = m; i-- > 0;) {
    run += d.count[i];
    d.tail_count[i] = run;
    if (d.value[i] >= 1)
      slog.add(static_cast<double>(d.count[i]) * std::log(static_cast<double>(d.value[i])));
    d.tail_sumlog[i] = slog.value();
  }
  return d;
}

// KS statistic for the candidate starting at distinct index i.  The gap
// between a step function and a monotone CDF peaks at observed values and at
// the integers just before each jump; both are scanned.
double candidate_ks(const DistinctView& d, std::size_t i, const PowerLaw& model) {
  std::int64_t x0 = d.value[i];
  double n_tail = static_cast<double>(d.tail_count[i]);
  auto model_cdf = [&](std::int64_t x) { return 1.0 - model.ccdf(x + 1); };
  double ks = 0.0;
  double prev = 0.0;
  std::int64_t cum = 0;
  for (std::size_t j = i; j < d.value.size(); ++j) {
    std::int64_t v = d.value[j];
    cum += d.count[j];
    double s = static_cast<double>(cum) / n_tail;
    if (v - 1 >= x0) ks = std::max(ks, std::abs(prev - model_cdf(v - 1)));
    ks = std::max(ks, std::abs(s - model_cdf(v)));
    prev = s;
  }
  return ks;
}

}  // namespace

CountSample CountSample::from_values(std::string name, std::vector<std::int64_t> values) {
  for (std::int64_t v : values)
    if (v < 0) throw domain_error("CountSample: negative observation");
  std::sort(values.begin(), values.end());
  CountSample s;
  s.name = std::move(name);
  s.counts = std::move(values);
  return s;
}

TailCdf empirical_tail_cdf(const CountSample& sample, std::int64_t x0) {
  auto lo = std::lower_bound(sample.counts.begin(), sample.counts.end(), x0);
  if (lo == sample.counts.end()) throw empty_tail_error("empirical_tail_cdf: no observations >= x0");
  TailCdf t;
  t.x0 = x0;
  t.n_tail = static_cast<std::int64_t>(sample.counts.end() - lo);
  std::int64_t cum = 0;
  for (auto it = lo; it != sample.counts.end();) {
    auto run = it;
    while (run != sample.counts.end() && *run == *it) ++run;
    cum += run - it;
    t.value.push_back(*it);
    t.cdf.push_back(static_cast<double>(cum) / static_cast<double>(t.n_tail));
    it = run;
  }
  return t;
}

double TailCdf::operator()(std::int64_t x) const {
  auto it = std::upper_bound(value.begin(), value.end(), x);
  if (it == value.begin()) return 0.0;
  return cdf[static_cast<std::size_t>(it - value.begin()) - 1];
}

double ks_statistic(const CountSample& sample, const PowerLaw& model) {
  std::int64_t x0 = model.x0();
  TailCdf s = empirical_tail_cdf(sample, x0);
  auto model_cdf = [&](std::int64_t x) { return 1.0 - model.ccdf(x + 1); };
  double ks = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < s.value.size(); ++j) {
    std::int64_t v = s.value[j];
    if (v - 1 >= x0) ks = std::max(ks, std::abs(prev - model_cdf(v - 1)));
    ks = std::max(ks, std::abs(s.cdf[j] - model_cdf(v)));
    prev = s.cdf[j];
  }
  return ks;
}

PowerLawFit estimate_xmin(const CountSample& sample, const ScanOptions& opts) {
  if (sample.counts.empty()) throw empty_tail_error("estimate_xmin: empty sample");
  if (opts.min_tail < 2) throw domain_error("estimate_xmin: min_tail must be >= 2");
  DistinctView d = distinct_view(sample.counts);
  std::size_t m = d.value.size();

  bool found = false;
  std::size_t best_i = 0;
  double best_alpha = 0.0;
  double best_ks = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (d.value[i] < 1) continue;
    if (d.tail_count[i] < opts.min_tail) break;  // tails only shrink from here
    if (m - i < 2) break;                        // one distinct value: alpha unbounded
    double alpha = power_law_alpha_mle(d.tail_sumlog[i], d.tail_count[i], d.value[i], opts.fit);
    PowerLaw model(alpha, d.value[i]);
    double ks = candidate_ks(d, i, model);
    if (!found || ks < best_ks) {
      found = true;
      best_i = i;
      best_alpha = alpha;
      best_ks = ks;
    }
  }
  if (!found)
    throw insufficient_tail_error("estimate_xmin: no cutoff candidate leaves a usable tail");

  PowerLawFit fit{PowerLaw(best_alpha, d.value[best_i])};
  fit.n_tail = d.tail_count[best_i];
  fit.frac_tail = static_cast<double>(fit.n_tail) / static_cast<double>(sample.n());
  fit.ks = best_ks;
  return fit;
}

BootstrapResult bootstrap_se(const CountSample& sample, int reps, std::uint64_t seed,
                             const ScanOptions& opts) {
  if (reps < 2) throw domain_error("bootstrap_se: reps must be >= 2");
  std::size_t n = sample.counts.size();
  std::vector<double> alpha(reps), x0(reps);
  std::vector<char> ok(reps, 0);
  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
    engine e = make_engine(mix_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<std::int64_t> res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = sample.counts[uniform_below(e, n)];
    std::sort(res.begin(), res.end());
    CountSample boot;
    boot.name = sample.name;
    boot.counts = std::move(res);
    try {
      PowerLawFit f = estimate_xmin(boot, opts);
      alpha[r] = f.model.alpha();
      x0[r] = static_cast<double>(f.model.x0());
      ok[r] = 1;
    } catch (const error&) {
      ok[r] = 0;
    }
  });

  BootstrapResult out;
  for (int r = 0; r < reps; ++r) (ok[r] ? out.n_ok : out.n_failures)++;
  if (2 * out.n_failures > reps || out.n_ok < 2)
    throw bootstrap_failure_error("bootstrap_se: too many replicate failures (" +
                                  std::to_string(out.n_failures) + "/" + std::to_string(reps) +
                                  ")");

  auto sample_sd = [&](const std::vector<double>& v) {
    Kahan mean;
    for (int r = 0; r < reps; ++r)
      if (ok[r]) mean.add(v[r]);
    double mu = mean.value() / static_cast<double>(out.n_ok);
    Kahan ss;
    for (int r = 0; r < reps; ++r)
      if (ok[r]) ss.add((v[r] - mu) * (v[r] - mu));
    return std::sqrt(ss.value() / static_cast<double>(out.n_ok - 1));
  };
  out.se_alpha = sample_sd(alpha);
  out.se_x0 = sample_sd(x0);
  return out;
}

}  // namespace tailfit
