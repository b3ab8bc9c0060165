#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tailfit/models.hpp"

namespace tailfit {

// A named sample of non-negative integer counts, kept sorted ascending.
// Zeros are legal observations but can never join a power-law tail.
struct CountSample {
  std::string name;
  std::vector<std::int64_t> counts;

  std::int64_t n() const { return static_cast<std::int64_t>(counts.size()); }

  static CountSample from_values(std::string name, std::vector<std::int64_t> values);
};

// Right-continuous empirical CDF of the tail at x0:
// S(x) = #{x0 <= xi <= x} / n_tail for integer x >= x0.
struct TailCdf {
  std::int64_t x0 = 1;
  std::int64_t n_tail = 0;
  std::vector<std::int64_t> value;  // distinct tail values ascending
  std::vector<double> cdf;          // S evaluated at each distinct value

  double operator()(std::int64_t x) const;
};

TailCdf empirical_tail_cdf(const CountSample& sample, std::int64_t x0);

// sup over integers x >= x0 of |S(x) - P(x)| where P is the model CDF on the
// tail.  The sup of a step-vs-monotone gap is attained at observed values and
// at the integers just before each jump, so only those points are evaluated.
double ks_statistic(const CountSample& sample, const PowerLaw& model);

struct PowerLawFit {
  PowerLaw model;
  double se_alpha = std::numeric_limits<double>::quiet_NaN();
  double se_x0 = std::numeric_limits<double>::quiet_NaN();
  std::int64_t n_tail = 0;
  double frac_tail = 0.0;  // n_tail / full sample size
  double ks = 0.0;
};

struct ScanOptions {
  std::int64_t min_tail = 50;
  FitOptions fit;
};

// Scans every distinct observed value >= 1 whose tail holds at least
// min_tail observations (and at least two distinct values), fits alpha by ML
// on each candidate tail and returns the candidate with the smallest KS
// statistic; ties break toward the smallest cutoff.  Standard errors are
// left NaN; see bootstrap_se.
PowerLawFit estimate_xmin(const CountSample& sample, const ScanOptions& opts = {});

struct BootstrapResult {
  double se_alpha = 0.0;
  double se_x0 = 0.0;
  int n_ok = 0;
  int n_failures = 0;
};

// Nonparametric bootstrap of the whole estimate_xmin procedure: reps
// resamples of the full sample (body included, so the cutoff is re-estimated
// each time), sample standard deviations over the replicate estimates.
// Replicates are seeded from (seed, replicate index) and may run in any
// order.  Failed replicates are dropped and counted; more than 50% failures
// raises bootstrap_failure_error.
BootstrapResult bootstrap_se(const CountSample& sample, int reps, std::uint64_t seed,
                             const ScanOptions& opts = {});

}  // namespace tailfit
