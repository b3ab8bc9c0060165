#pragma once

#include <cstdint>

#include "tailfit/plfit.hpp"

namespace tailfit {

struct GofOptions {
  int n_sims = 1000;       // >= 100
  double threshold = 0.1;  // reject the power law below this p-value
  ScanOptions scan;        // must match the configuration of the original fit
};

struct GofResult {
  double k = 0.0;      // KS statistic of the original fit
  int n_sims = 0;      // successful synthetic replicates
  int n_exceed = 0;    // replicates whose own KS >= k
  int n_failures = 0;  // replicates whose refit failed (dropped)
  double p_value = 0.0;
  bool reject = false;
};

// One hybrid synthetic sample of the same total size: each point is, with
// probability n_tail/n, a draw from the fitted power law, and otherwise a
// uniform draw (with replacement) from the observed values below the cutoff.
// With an empty body every point is parametric.
CountSample synthesize(const CountSample& sample, const PowerLawFit& fit, std::uint64_t seed);

// Semi-parametric bootstrap goodness-of-fit: every synthetic sample is refit
// with the full cutoff scan and its own KS statistic is compared against the
// observed one; ties count as exceedances.  p_value = n_exceed / n_sims over
// the successful replicates.  More than 10% replicate failures raises
// gof_failure_error.
GofResult gof_pvalue(const CountSample& sample, const PowerLawFit& fit, const GofOptions& opts,
                     std::uint64_t seed);

}  // namespace tailfit
